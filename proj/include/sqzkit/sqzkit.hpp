#pragma once

#include "sqzkit/budget.hpp"
#include "sqzkit/errors.hpp"
#include "sqzkit/fit.hpp"
#include "sqzkit/io.hpp"
#include "sqzkit/least_squares.hpp"
#include "sqzkit/noise_model.hpp"
#include "sqzkit/spectra.hpp"
#include "sqzkit/synth.hpp"
#include "sqzkit/units.hpp"
