#include "plsv/construct.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace plsv {

namespace {

// Exact non-negative rational used for priorities and assignment costs.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void reduce() {
    const __int128 g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  Rational operator+(const Rational& o) const {
    const __int128 g = gcd(den, o.den);
    Rational r{num * (o.den / g) + o.num * (den / g), den / g * o.den};
    r.reduce();
    return r;
  }
  Rational operator*(std::int64_t k) const {
    Rational r{num * k, den};
    r.reduce();
    return r;
  }
  Rational divided_by(std::int64_t k) const {
    Rational r{num, den * k};
    r.reduce();
    return r;
  }
  long double approx() const {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
};

int compare(const Rational& a, const Rational& b) {
  __int128 lhs, rhs;
  if (__builtin_mul_overflow(a.num, b.den, &lhs) || __builtin_mul_overflow(b.num, a.den, &rhs)) {
    const long double x = a.approx(), y = b.approx();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

struct MachineState {
  Time completion;  // C_k
  Time start;       // S_k, start of the current batch
  int load = 0;     // L_k
  int family = -1;  // F_k, -1 while the machine is empty
  std::vector<int> members;  // A_k
};

Schedule construct(const Instance& inst, double rcl_alpha, Rng* rng, std::vector<ConstructStep>* trace) {
  const int n = inst.num_ops();
  std::vector<MachineState> ms;
  for (const auto& m : inst.machines) ms.push_back({m.release, m.release, 0, -1, {}});
  Schedule sched(inst.num_machines());

  std::vector<bool> scheduled(n, false);
  std::vector<int> unscheduled_in_job(inst.num_jobs());
  for (int j = 0; j < inst.num_jobs(); ++j)
    unscheduled_in_job[j] = static_cast<int>(inst.jobs[j].ops.size());
  // weight each operation carried when it was selected; used for the delay term
  std::vector<Rational> weight_at_selection(n);

  std::vector<Rational> w(n), pi(n);
  for (int step = 0; step < n; ++step) {
    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
      if (scheduled[i]) continue;
      Rational wi{0, 1};
      for (int j : inst.jobs_of_op()[i]) wi = wi + Rational{inst.jobs[j].weight, unscheduled_in_job[j]};
      Time t = INT64_MAX;
      for (int k : inst.ops[i].eligible) t = std::min(t, ms[k].completion);
      const Time denom = std::max(t, inst.ops[i].release) + inst.ops[i].processing + inst.setup_of(i);
      w[i] = wi;
      pi[i] = wi.divided_by(denom);
      candidates.push_back(i);
    }

    int best = candidates.front();
    for (int i : candidates)
      if (compare(pi[i], pi[best]) > 0) best = i;
    int chosen = best;
    if (rng && rcl_alpha > 0.0) {
      int worst = candidates.front();
      for (int i : candidates)
        if (compare(pi[i], pi[worst]) < 0) worst = i;
      std::vector<int> rcl;
      if (rcl_alpha >= 1.0) {
        rcl = candidates;
      } else {
        const long double hi = pi[best].approx(), lo = pi[worst].approx();
        const long double threshold = hi - static_cast<long double>(rcl_alpha) * (hi - lo);
        const long double tol = 1e-12L * std::max<long double>(1.0L, hi);
        for (int i : candidates)
          if (compare(pi[i], pi[best]) == 0 || pi[i].approx() >= threshold - tol) rcl.push_back(i);
      }
      chosen = rcl[static_cast<size_t>(rng->uniform_int(0, static_cast<std::int64_t>(rcl.size()) - 1))];
    }

    if (trace) {
      ConstructStep st;
      st.weight.assign(n, std::numeric_limits<long double>::quiet_NaN());
      st.priority = st.weight;
      for (int c : candidates) {
        st.weight[c] = w[c].approx();
        st.priority[c] = pi[c].approx();
      }
      st.chosen = chosen;
      trace->push_back(std::move(st));
    }

    const int i = chosen;
    const auto& op = inst.ops[i];
    const Time s = inst.setup_of(i);

    // cost of each feasible assignment; ties prefer current batch, then lower machine
    bool have = false, best_is_cb = false;
    int best_k = -1;
    Rational best_cost;
    Time best_c = 0;
    for (int pass = 0; pass < 2; ++pass) {
      const bool cb = pass == 0;
      for (int k : op.eligible) {
        const auto& m = ms[k];
        Rational cost;
        Time c;
        if (cb) {
          if (m.family != op.family || m.load + op.load > inst.machines[k].capacity) continue;
          const Time delta = std::max<Time>(0, op.release - m.start);
          c = m.completion + delta + op.processing;
          cost = w[i] * c;
          for (int x : m.members) cost = cost + weight_at_selection[x] * delta;
        } else {
          c = std::max(op.release, m.completion) + s + op.processing;
          cost = w[i] * c;
        }
        if (!have || compare(cost, best_cost) < 0) {
          have = true;
          best_cost = cost;
          best_k = k;
          best_is_cb = cb;
          best_c = c;
        }
      }
    }

    auto& m = ms[best_k];
    if (best_is_cb) {
      m.start = std::max(op.release, m.start);
      m.completion = best_c;
      m.load += op.load;
      m.members.push_back(i);
      sched.machines[best_k].back().ops.push_back(i);
    } else {
      m.start = std::max(op.release, m.completion);
      m.completion = best_c;
      m.load = op.load;
      m.members = {i};
      sched.machines[best_k].push_back(Batch{op.family, {i}});
    }
    m.family = op.family;
    weight_at_selection[i] = w[i];
    scheduled[i] = true;
    for (int j : inst.jobs_of_op()[i]) --unscheduled_in_job[j];
  }
  return sched;
}

}  // namespace

Schedule wmct_wavga(const Instance& inst) { return construct(inst, 0.0, nullptr, nullptr); }

Schedule wmct_wavga(const Instance& inst, std::vector<ConstructStep>& trace) {
  trace.clear();
  return construct(inst, 0.0, nullptr, &trace);
}

Schedule randomized_construct(const Instance& inst, double rcl_alpha, Rng& rng) {
  return construct(inst, rcl_alpha, &rng, nullptr);
}

}  // namespace plsv
