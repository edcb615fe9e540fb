#pragma once

#include <string>
#include <vector>

#include "plsv/instance.hpp"

namespace plsv {

// One family setup followed by the member operations, processed in order.
struct Batch {
  int family = 0;
  std::vector<int> ops;

  bool operator==(const Batch&) const = default;
};

// Per-machine ordered list of batches.
struct Schedule {
  std::vector<std::vector<Batch>> machines;

  Schedule() = default;
  explicit Schedule(int num_machines) : machines(num_machines) {}

  int num_machines() const { return static_cast<int>(machines.size()); }
  int num_batches() const;
  // Removes empty batches; they only exist transiently inside the search.
  void drop_empty();

  bool operator==(const Schedule&) const = default;
};

struct EvalResult {
  std::vector<std::vector<Time>> batch_start;       // S_k^b
  std::vector<std::vector<Time>> batch_processing;  // P_k^b
  std::vector<Time> op_completion;                  // C_i
  std::vector<Time> job_completion;                 // C_j
  Time twct = 0;
  Time cmax = 0;

  Time batch_end(int k, int b) const { return batch_start[k][b] + batch_processing[k][b]; }
};

// Semi-active timing with non-anticipatory setups. Throws Error(InvalidArgument)
// naming the offending operation when an op is missing or duplicated, or when a
// batch is empty.
EvalResult evaluate(const Instance& inst, const Schedule& sched);

enum class ViolationKind { Coverage, Family, Capacity, Eligibility, EmptyBatch, UnknownMachine };

struct Violation {
  ViolationKind kind;
  int machine = -1;
  int batch = -1;
  int op = -1;
  std::string message;
};

const char* to_string(ViolationKind kind);

// Exhaustive: every violated rule is reported, empty result iff feasible.
std::vector<Violation> check_feasibility(const Instance& inst, const Schedule& sched);

std::string describe(const std::vector<Violation>& violations);

}  // namespace plsv
