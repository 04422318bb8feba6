#pragma once

// Umbrella header for the data-dividend Stackelberg game solver.

#include "divgame/breach_model.hpp"
#include "divgame/config.hpp"
#include "divgame/game.hpp"
#include "divgame/oracle.hpp"
#include "divgame/report.hpp"
#include "divgame/solver.hpp"
#include "divgame/sweep.hpp"
#include "divgame/verify_run.hpp"
