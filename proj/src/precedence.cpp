#include "plsv/precedence.hpp"

#include <algorithm>

namespace plsv {

Theta Theta::from_schedule(const Schedule& sched, int num_ops) {
  Theta t(num_ops);
  for (const auto& m : sched.machines)
    for (const auto& batch : m)
      for (size_t x = 0; x < batch.ops.size(); ++x)
        for (size_t y = x + 1; y < batch.ops.size(); ++y) t.set(batch.ops[x], batch.ops[y]);
  return t;
}

std::vector<int> Precedence::set_of(int i) const {
  std::vector<int> out;
  for (int a = 0; a < n_; ++a)
    if (precedes(a, i)) out.push_back(a);
  return out;
}

namespace {

// sign of w_a/p_a - w_b/p_b
int compare_ratio(const Fraction& wa, Time pa, const Fraction& wb, Time pb) {
  const __int128 lhs = static_cast<__int128>(wa.num) * wb.den * pb;
  const __int128 rhs = static_cast<__int128>(wb.num) * wa.den * pa;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

int compare_weight(const Fraction& a, const Fraction& b) {
  const __int128 lhs = static_cast<__int128>(a.num) * b.den;
  const __int128 rhs = static_cast<__int128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

Precedence wspt_order(const Instance& inst, const Theta* theta) {
  const int n = inst.num_ops();
  const auto w = estimated_weights(inst);
  Precedence prec(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      if (a == i) continue;
      if (theta) {
        const bool ai = theta->get(a, i), ia = theta->get(i, a);
        if (ai != ia) {
          if (ai) prec.set(a, i);
          continue;
        }
      }
      const int r = compare_ratio(w[a], inst.ops[a].processing, w[i], inst.ops[i].processing);
      if (r > 0 || (r == 0 && (compare_weight(w[a], w[i]) > 0 ||
                               (compare_weight(w[a], w[i]) == 0 && a < i))))
        prec.set(a, i);
    }
  }
  return prec;
}

void apply_precedence(Schedule& sched, const Precedence& prec) {
  for (auto& m : sched.machines) {
    for (auto& batch : m) {
      std::vector<std::pair<int, int>> keyed;
      for (int i : batch.ops) {
        int preds = 0;
        for (int a : batch.ops)
          if (a != i && prec.precedes(a, i)) ++preds;
        keyed.emplace_back(preds, i);
      }
      std::sort(keyed.begin(), keyed.end());
      for (size_t x = 0; x < keyed.size(); ++x) batch.ops[x] = keyed[x].second;
    }
  }
}

}  // namespace plsv
