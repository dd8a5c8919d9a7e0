#pragma once

#include "tinyairnet/profiles.hpp"
#include "tinyairnet/stats.hpp"
#include "tinyairnet/energy.hpp"
#include "tinyairnet/analytics.hpp"
#include "tinyairnet/montecarlo.hpp"
#include "tinyairnet/optimize.hpp"
#include "tinyairnet/config.hpp"
#include "tinyairnet/commands.hpp"
