#pragma once

#include "trplan/environment.hpp"
#include "trplan/errors.hpp"
#include "trplan/geometry.hpp"
#include "trplan/gmdm.hpp"
#include "trplan/planner.hpp"
#include "trplan/random.hpp"
#include "trplan/report.hpp"
#include "trplan/runner.hpp"
#include "trplan/scenario.hpp"
#include "trplan/timerisk.hpp"
