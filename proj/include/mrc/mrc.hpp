#pragma once

#include "mrc/analysis.hpp"
#include "mrc/centralized.hpp"
#include "mrc/circuit.hpp"
#include "mrc/csv.hpp"
#include "mrc/distributed.hpp"
#include "mrc/property_suite.hpp"
#include "mrc/scenario_io.hpp"
