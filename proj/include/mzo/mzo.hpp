#pragma once

// Umbrella header: the full analysis stack.

#include "mzo/config.hpp"
#include "mzo/counting.hpp"
#include "mzo/errors.hpp"
#include "mzo/kernels.hpp"
#include "mzo/model.hpp"
#include "mzo/noise.hpp"
#include "mzo/oracles.hpp"
#include "mzo/oscillator.hpp"
#include "mzo/quadrature.hpp"
#include "mzo/report.hpp"
#include "mzo/spectra_approx.hpp"
#include "mzo/spectra_exact.hpp"
#include "mzo/weyl.hpp"
