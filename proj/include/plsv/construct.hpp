#pragma once

#include <vector>

#include "plsv/instance.hpp"
#include "plsv/rng.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

// Greedy dispatching with dynamic weight averaging: repeatedly picks the unscheduled
// operation with the largest w_i / (max(T_i, r_i) + p_i + s_{f_i}) and appends it to
// the current batch or a new batch on the machine with the smallest weighted cost.
Schedule wmct_wavga(const Instance& inst);

// Per-step record of the selection: dynamic weights and priorities of the
// unscheduled operations (NaN for scheduled ones) and the chosen operation.
struct ConstructStep {
  std::vector<long double> weight;
  std::vector<long double> priority;
  int chosen = -1;
};

Schedule wmct_wavga(const Instance& inst, std::vector<ConstructStep>& trace);

// Same procedure with the selection step drawn uniformly from the restricted
// candidate list {i : pi_i >= pi_max - rcl_alpha (pi_max - pi_min)}. rcl_alpha = 0
// consumes no randomness and reproduces wmct_wavga.
Schedule randomized_construct(const Instance& inst, double rcl_alpha, Rng& rng);

}  // namespace plsv
