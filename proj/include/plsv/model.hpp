#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plsv/instance.hpp"
#include "plsv/precedence.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

enum class Formulation { Wspt, Sequencing };

const char* to_string(Formulation f);

struct ModelConfig {
  Formulation kind = Formulation::Wspt;
  // 0 selects the horizon bound max r_k + max r_i + sum p_i + sum_k |B_k| max s_f.
  Time big_m = 0;
};

Time default_big_m(const Instance& inst);

// Machines able to host each pair (and flags for pairs and triplets) in one batch:
// same family, all eligible, combined load within capacity.
class CompatibilitySets {
public:
  CompatibilitySets() = default;
  explicit CompatibilitySets(const Instance& inst);

  const std::vector<int>& pair_machines(int a, int b) const { return pair_machines_[index(a, b)]; }
  bool pair(int a, int b) const { return a != b && !pair_machines(a, b).empty(); }
  bool triplet(int a, int b, int c) const;

private:
  size_t index(int a, int b) const { return static_cast<size_t>(a) * n_ + b; }
  const Instance* inst_ = nullptr;
  int n_ = 0;
  std::vector<std::vector<int>> pair_machines_;
};

CompatibilitySets compatibility_sets(const Instance& inst);

enum class VarType { Binary, Continuous };
enum class Sense { LessEq, GreaterEq, Equal };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
};

struct Term {
  int var;
  std::int64_t coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEq;
  std::int64_t rhs = 0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Variables, constraints and index maps of one formulation; shared by all
// restrictions of the same model.
struct ModelStructure {
  std::shared_ptr<const Instance> instance;
  Formulation kind = Formulation::Wspt;
  Time big_m = 0;
  Precedence precedence;  // Batch-WSPT only
  CompatibilitySets compat;
  std::vector<int> slots;  // |B_k|

  std::vector<Variable> vars;
  std::vector<Constraint> constraints;
  std::vector<Term> objective;

  // -1 where a variable does not exist
  std::vector<std::vector<std::vector<int>>> x;  // [i][k][b]
  std::vector<std::vector<std::vector<int>>> y;  // [f][k][b]
  std::vector<std::vector<int>> z;               // [i][i']
  std::vector<std::vector<int>> s, p;            // [k][b]
  std::vector<int> c_op, c_job;

  int x_var(int i, int k, int b) const { return x[i][k][b]; }
};

// A formulation plus its current variable bounds.
class BatchModel {
public:
  BatchModel() = default;
  explicit BatchModel(std::shared_ptr<const ModelStructure> st);

  const ModelStructure& structure() const { return *st_; }
  const Instance& instance() const { return *st_->instance; }
  Formulation kind() const { return st_->kind; }
  int num_vars() const { return static_cast<int>(st_->vars.size()); }

  double lower(int v) const { return lb_[v]; }
  double upper(int v) const { return ub_[v]; }
  void set_bounds(int v, double lo, double hi) {
    lb_[v] = lo;
    ub_[v] = hi;
  }
  void fix(int v, double value) { set_bounds(v, value, value); }

private:
  std::shared_ptr<const ModelStructure> st_;
  std::vector<double> lb_, ub_;
};

// Builds Batch-WSPT (requires prec) or Batch-S. X[i,k,b] exists for k in M_i,
// b < |O_k|, l_i <= q_k; Z[i,i'] exists for compatible pairs only.
BatchModel build_model(std::shared_ptr<const Instance> inst, const ModelConfig& cfg,
                       const Precedence* prec = nullptr);

// Slot (machine, position) of a batch, 0-based.
using Slot = std::pair<int, int>;

// Fixes every X outside free_ops x free_batches to the incumbent, restricts X of
// free_ops to free_batches, fixes Y of non-free batches and, for Batch-S, the Z of
// pairs that are both outside free_ops. The incumbent stays feasible.
BatchModel restrict_and_fix(const BatchModel& model, const Schedule& incumbent,
                            const std::set<Slot>& free_batches, const std::set<int>& free_ops);

// Variable values realizing a schedule: batch b of machine k goes to slot b, empty
// trailing slots start at the end of the previous batch, Z follows batch order.
std::vector<std::int64_t> encode_schedule(const BatchModel& model, const Schedule& sched);

// Names of violated constraints and bounds (empty list = feasible point).
std::vector<std::string> check_point(const BatchModel& model, const std::vector<std::int64_t>& values);

std::int64_t objective_value(const BatchModel& model, const std::vector<std::int64_t>& values);

// Schedule from X (and Z / precedence for the inner order).
Schedule decode_point(const BatchModel& model, const std::vector<std::int64_t>& values);

}  // namespace plsv
