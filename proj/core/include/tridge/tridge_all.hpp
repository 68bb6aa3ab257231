#pragma once

#include "tridge/cv.hpp"
#include "tridge/error.hpp"
#include "tridge/glm.hpp"
#include "tridge/reference.hpp"
#include "tridge/report.hpp"
#include "tridge/ridge.hpp"
#include "tridge/rng.hpp"
#include "tridge/sim.hpp"
#include "tridge/tridge.hpp"
