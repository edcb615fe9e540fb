#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plsv {

using Time = std::int64_t;

// Error categories shared by the C++ layer and the C API.
enum class ErrorKind { InvalidArgument, Parse, Infeasible, Io, Limit, Internal };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// All indices below are 0-based; files and printed output use id = index + 1.
struct Operation {
  Time processing = 1;
  Time release = 0;
  int load = 0;
  int family = 0;
  std::vector<int> eligible;  // machine indices, sorted
};

struct Job {
  int weight = 1;
  std::vector<int> ops;  // operation indices, sorted
};

struct Machine {
  Time release = 0;
  int capacity = 1;
};

struct Family {
  Time setup = 0;
};

class Instance {
public:
  std::vector<Operation> ops;
  std::vector<Job> jobs;
  std::vector<Machine> machines;
  std::vector<Family> families;

  int num_ops() const { return static_cast<int>(ops.size()); }
  int num_jobs() const { return static_cast<int>(jobs.size()); }
  int num_machines() const { return static_cast<int>(machines.size()); }
  int num_families() const { return static_cast<int>(families.size()); }

  // N_i: jobs associated with each operation.
  const std::vector<std::vector<int>>& jobs_of_op() const { return jobs_of_op_; }
  // O_k: operations machine k may run.
  const std::vector<std::vector<int>>& ops_of_machine() const { return ops_of_machine_; }

  bool eligible(int op, int machine) const;
  Time setup_of(int op) const { return families[ops[op].family].setup; }

  // Rebuilds N_i and O_k from jobs and eligibility lists. Called by validate_instance.
  void derive_maps();

  bool operator==(const Instance& other) const;

private:
  std::vector<std::vector<int>> jobs_of_op_;
  std::vector<std::vector<int>> ops_of_machine_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks every structural invariant and fills the derived maps when valid.
ValidationReport validate_instance(Instance& inst);

// Throws Error(InvalidArgument) carrying the report when the instance is not valid.
void require_valid(Instance& inst);

// Estimated operation weight w_i = sum_{j in N_i} w_j / |O_j| as an exact fraction
// over the common denominator lcm(|O_j|).
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

std::vector<Fraction> estimated_weights(const Instance& inst);

}  // namespace plsv
