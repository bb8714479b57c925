#pragma once

#include "horizon_spectra/area_charge.hpp"
#include "horizon_spectra/axisym_eigensolver.hpp"
#include "horizon_spectra/error.hpp"
#include "horizon_spectra/horizon_geometry.hpp"
#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/invariants.hpp"
#include "horizon_spectra/mots_spectrum.hpp"
#include "horizon_spectra/perturbation.hpp"
#include "horizon_spectra/scan.hpp"
#include "horizon_spectra/tridiagonal.hpp"
