#pragma once

#include "coopnav/analysis.hpp"
#include "coopnav/belief.hpp"
#include "coopnav/error.hpp"
#include "coopnav/experiment.hpp"
#include "coopnav/graph.hpp"
#include "coopnav/inspection.hpp"
#include "coopnav/partition.hpp"
#include "coopnav/scenario.hpp"
#include "coopnav/simulation.hpp"
#include "coopnav/strategies.hpp"
