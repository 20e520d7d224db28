#pragma once

#include "pgdetect/analytic.hpp"
#include "pgdetect/core_model.hpp"
#include "pgdetect/detectors.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/prob_kernels.hpp"
#include "pgdetect/series_io.hpp"
#include "pgdetect/sim.hpp"
#include "pgdetect/spectral.hpp"
#include "pgdetect/test_kind.hpp"
