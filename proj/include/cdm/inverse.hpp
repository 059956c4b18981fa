#pragma once

#include "cdm/inverse/claw.hpp"
#include "cdm/inverse/nsga2.hpp"
#include "cdm/inverse/optim.hpp"
#include "cdm/inverse/problems.hpp"
