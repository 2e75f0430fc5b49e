#pragma once

// Umbrella header for the DYSCO spin-sensing simulator.

#include "dysco/analysis.hpp"
#include "dysco/config.hpp"
#include "dysco/constants.hpp"
#include "dysco/experiments.hpp"
#include "dysco/fft.hpp"
#include "dysco/propagate.hpp"
#include "dysco/pulse.hpp"
#include "dysco/rng.hpp"
#include "dysco/spin.hpp"
#include "dysco/table.hpp"
#include "dysco/waveform.hpp"
