#pragma once

#include "backhaul/approx_planner.hpp"
#include "backhaul/connectivity.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/exact_solver.hpp"
#include "backhaul/experiments.hpp"
#include "backhaul/feasibility.hpp"
#include "backhaul/io.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/of_planner.hpp"
#include "backhaul/topology.hpp"
