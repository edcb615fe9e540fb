#pragma once

#include <utility>
#include <vector>

#include "plsv/instance.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

// Ordered pairs (a, b): a and b share a batch and a runs before b.
class Theta {
public:
  explicit Theta(int num_ops = 0) : n_(num_ops), bits_(static_cast<size_t>(num_ops) * num_ops) {}

  static Theta from_schedule(const Schedule& sched, int num_ops);

  void set(int a, int b) { bits_[static_cast<size_t>(a) * n_ + b] = true; }
  bool get(int a, int b) const { return bits_[static_cast<size_t>(a) * n_ + b]; }
  int num_ops() const { return n_; }

private:
  int n_;
  std::vector<bool> bits_;
};

// Inner-batch precedence sets O_i: precedes(a, i) holds iff a belongs to O_i.
class Precedence {
public:
  Precedence() = default;
  explicit Precedence(int num_ops) : n_(num_ops), bits_(static_cast<size_t>(num_ops) * num_ops) {}

  bool precedes(int a, int i) const { return bits_[static_cast<size_t>(a) * n_ + i]; }
  void set(int a, int i) { bits_[static_cast<size_t>(a) * n_ + i] = true; }
  int num_ops() const { return n_; }
  bool empty() const { return n_ == 0; }

  // O_i as a sorted list of operation indices.
  std::vector<int> set_of(int i) const;

private:
  int n_ = 0;
  std::vector<bool> bits_;
};

// Lexicographic rule: higher w/p first, then higher w, then lower index. When theta
// is supplied, a recorded pair dominates the rule for that pair.
Precedence wspt_order(const Instance& inst, const Theta* theta = nullptr);

// Sorts the members of each batch so that predecessors come first (by the number
// of in-batch predecessors, ties by index). Exact when the relation is a total order
// on the batch.
void apply_precedence(Schedule& sched, const Precedence& prec);

}  // namespace plsv
