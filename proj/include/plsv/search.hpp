#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plsv/instance.hpp"
#include "plsv/model.hpp"
#include "plsv/rng.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

struct Params {
  double rho = 0.20;    // window size as a fraction of the makespan
  double phi = 0.30;    // batches freed per relocate iteration, fraction of sum MB_k
  double omega = 0.10;  // swaps per perturbation, fraction of sum MB_k
  double delta = 0.00;  // acceptance slack
  double rcl_alpha = 0.10;
  int omega_max = 10;
  double sub_time_limit = 1.0;      // seconds per sub-solve, <= 0 for none
  std::int64_t sub_node_limit = 0;  // nodes per sub-solve, 0 for none
  int swap_retries = 100;
  bool external_solver = false;  // sub-solves through solve_external(solver_command)
  std::string solver_command;

  // Throws Error(InvalidArgument) naming the offending field.
  void validate() const;
};

enum class Method { Ils, Grasp };

const char* to_string(Method m);

struct RunEvent {
  double seconds = 0.0;
  std::int64_t work = 0;  // cumulative branch-and-bound nodes
  Time twct = 0;          // value of the solution the event refers to
  Time best = 0;          // best value so far
  std::string phase;
  Formulation formulation = Formulation::Wspt;
};

struct RunLog {
  std::vector<RunEvent> events;
};

// Per-run search context: MB_k, random stream, parameters, work counters and
// the model cache.
class SearchState {
public:
  SearchState(std::shared_ptr<const Instance> inst, const Params& params, std::uint64_t seed);

  const Instance& instance() const { return *inst_; }
  const Params& params() const { return params_; }
  Rng& rng() { return rng_; }

  std::vector<int> mb;  // MB_k
  RunLog log;

  // Frees free_batches (and the operations inside them) and keeps the sub-solve
  // result only when it strictly improves the twct.
  Schedule optimize(const Schedule& sched, const std::set<Slot>& free_batches, Formulation kind);

  std::int64_t nodes() const { return nodes_; }
  int sub_solves() const { return sub_solves_; }
  double elapsed() const;
  void record(const std::string& phase, Time twct, Formulation kind);
  Time best_seen() const { return best_seen_; }

private:
  std::shared_ptr<const Instance> inst_;
  Params params_;
  Rng rng_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t nodes_ = 0;
  int sub_solves_ = 0;
  Time best_seen_ = -1;
  std::unique_ptr<BatchModel> sequencing_;
};

// MB_k = min(1 + used batches, |B_k|); machines without eligible operations get 0.
void init_mb(SearchState& state, const Schedule& sched);
// Same formula, only on machines whose available batches are all used.
void update_mb(SearchState& state, const Schedule& sched);

int ceil_fraction(double fraction, int total);

// (R_begin, R_end) of every Batch Windows iteration for a given makespan.
std::vector<std::pair<double, double>> window_ranges(Time cmax, Time range_size);
Time window_size(double rho, Time cmax);

// Iteration sizes of one relocate pass over `available` batches.
std::vector<int> relocate_sizes(int available, double phi);

// Slots selected by a window: S <= R_end, C >= R_begin, b < MB_k; empty available
// slots start and end where the machine's last batch ends.
std::set<Slot> window_slots(const Instance& inst, const Schedule& sched, const std::vector<int>& mb, double r_begin,
                            double r_end);

Schedule batch_windows(SearchState& state, const Schedule& sched, Formulation kind);
Schedule multi_batches_relocate(SearchState& state, const Schedule& sched, Formulation kind);
Schedule vnd(SearchState& state, const Schedule& sched, Formulation kind);

// MB_k slots per machine, empty batches padding the tail.
using BatchGrid = std::vector<std::vector<Batch>>;
BatchGrid to_grid(const Schedule& sched, const std::vector<int>& mb);
Schedule from_grid(const BatchGrid& grid);
void swap_slots(BatchGrid& grid, Slot a, Slot b);
// Capacity and eligibility of both batches after the exchange.
bool swap_feasible(const Instance& inst, const BatchGrid& grid, Slot a, Slot b);

// NS = ceil(omega * sum MB_k) exchanges; infeasible or empty/empty draws are
// redrawn up to swap_retries times.
Schedule random_batch_swap(SearchState& state, const Schedule& sched);

struct RunResult {
  Schedule schedule;
  Time twct = 0;
  Time constructive_twct = 0;
  RunLog log;
  std::int64_t nodes = 0;
  int sub_solves = 0;
  double seconds = 0.0;
};

// variant 1: Batch-WSPT throughout; 2: Batch-S throughout; 3: Batch-WSPT in the main
// loop, Batch-S for the final intensification.
RunResult ils_math(std::shared_ptr<const Instance> inst, const Params& params, int variant, std::uint64_t seed);
RunResult grasp_math(std::shared_ptr<const Instance> inst, const Params& params, int variant, std::uint64_t seed);
RunResult run_variant(std::shared_ptr<const Instance> inst, Method method, int variant, const Params& params,
                      std::uint64_t seed);

}  // namespace plsv
