#pragma once

#include "noisecal/attenuation.hpp"
#include "noisecal/calibration.hpp"
#include "noisecal/chain.hpp"
#include "noisecal/constants.hpp"
#include "noisecal/errors.hpp"
#include "noisecal/fit_result.hpp"
#include "noisecal/least_squares.hpp"
#include "noisecal/photons.hpp"
#include "noisecal/presets.hpp"
#include "noisecal/readout.hpp"
#include "noisecal/rng.hpp"
#include "noisecal/synth.hpp"
#include "noisecal/thermal.hpp"
#include "noisecal/thermal_fits.hpp"
#include "noisecal/tpad.hpp"
#include "noisecal/units.hpp"
