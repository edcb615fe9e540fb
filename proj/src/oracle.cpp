#include "plsv/oracle.hpp"

#include <algorithm>
#include <limits>

namespace plsv {

namespace {

class Enumerator {
public:
  explicit Enumerator(const Instance& inst) : inst_(inst), sched_(inst.num_machines()) {
    completion_.assign(inst.ops.size(), -1);
  }

  OracleResult run() {
    place(0);
    return {best_, best_sched_};
  }

private:
  // Placed ops only; inserting more ops never makes any of these earlier.
  Time partial_twct() {
    std::fill(completion_.begin(), completion_.end(), -1);
    for (int k = 0; k < inst_.num_machines(); ++k) {
      Time t = inst_.machines[k].release;
      for (const auto& batch : sched_.machines[k]) {
        Time start = t;
        for (int i : batch.ops) start = std::max(start, inst_.ops[i].release);
        t = start + inst_.families[batch.family].setup;
        for (int i : batch.ops) {
          t += inst_.ops[i].processing;
          completion_[i] = t;
        }
      }
    }
    Time total = 0;
    for (const auto& job : inst_.jobs) {
      Time c = 0;
      for (int i : job.ops) c = std::max(c, completion_[i]);
      total += job.weight * c;
    }
    return total;
  }

  void place(int i) {
    if (partial_twct() >= best_) return;
    if (i == inst_.num_ops()) {
      best_ = partial_twct();
      best_sched_ = sched_;
      return;
    }
    const auto& op = inst_.ops[i];
    for (int k : op.eligible) {
      auto& seq = sched_.machines[k];
      // into an existing batch, at every inner position
      for (size_t b = 0; b < seq.size(); ++b) {
        if (seq[b].family != op.family) continue;
        int load = op.load;
        for (int x : seq[b].ops) load += inst_.ops[x].load;
        if (load > inst_.machines[k].capacity) continue;
        for (size_t pos = 0; pos <= seq[b].ops.size(); ++pos) {
          seq[b].ops.insert(seq[b].ops.begin() + static_cast<long>(pos), i);
          place(i + 1);
          seq[b].ops.erase(seq[b].ops.begin() + static_cast<long>(pos));
        }
      }
      // as a new batch at every position of the machine sequence
      for (size_t b = 0; b <= seq.size(); ++b) {
        seq.insert(seq.begin() + static_cast<long>(b), Batch{op.family, {i}});
        place(i + 1);
        seq.erase(seq.begin() + static_cast<long>(b));
      }
    }
  }

  const Instance& inst_;
  Schedule sched_;
  std::vector<Time> completion_;
  Time best_ = std::numeric_limits<Time>::max();
  Schedule best_sched_;
};

}  // namespace

OracleResult brute_force_optimum(const Instance& inst, OracleLimits limits) {
  if (inst.num_ops() > limits.max_ops || inst.num_machines() > limits.max_machines)
    throw Error(ErrorKind::Limit, "instance too large for exhaustive enumeration (" +
                                      std::to_string(inst.num_ops()) + " ops, " +
                                      std::to_string(inst.num_machines()) + " machines)");
  return Enumerator(inst).run();
}

}  // namespace plsv
