#pragma once

#include "plsv/instance.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

struct OracleLimits {
  int max_ops = 7;
  int max_machines = 3;
};

struct OracleResult {
  Time twct = 0;
  Schedule schedule;
};

// Exhaustive enumeration of machine assignments, ordered batch partitions and
// inner-batch orders. Only usable on tiny instances; throws Error(Limit) beyond
// the configured size guard.
OracleResult brute_force_optimum(const Instance& inst, OracleLimits limits = {});

}  // namespace plsv
