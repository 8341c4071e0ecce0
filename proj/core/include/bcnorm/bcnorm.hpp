#pragma once

#include "bcnorm/boxcox.hpp"
#include "bcnorm/calibration.hpp"
#include "bcnorm/error.hpp"
#include "bcnorm/golden.hpp"
#include "bcnorm/montecarlo.hpp"
#include "bcnorm/normal.hpp"
#include "bcnorm/normality.hpp"
#include "bcnorm/sample.hpp"
#include "bcnorm/version.hpp"
