#include "plsv/search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "plsv/construct.hpp"
#include "plsv/precedence.hpp"
#include "plsv/subsolve.hpp"

namespace plsv {

namespace {

constexpr double kEps = 1e-9;

Time twct_of(const Instance& inst, const Schedule& s) { return evaluate(inst, s).twct; }

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void Params::validate() const {
  check_fraction(rho, "rho");
  check_fraction(phi, "phi");
  check_fraction(omega, "omega");
  check_fraction(delta, "delta");
  check_fraction(rcl_alpha, "rcl_alpha");
  if (omega_max < 1) throw Error(ErrorKind::InvalidArgument, "omega_max must be at least 1");
  if (sub_node_limit < 0) throw Error(ErrorKind::InvalidArgument, "sub_node_limit must be non-negative");
  if (sub_time_limit <= 0 && sub_node_limit == 0)
    throw Error(ErrorKind::InvalidArgument, "sub-solves need a time limit or a node limit");
  if (external_solver && solver_command.empty())
    throw Error(ErrorKind::InvalidArgument, "solver=external needs a solver_command");
  if (swap_retries < 1) throw Error(ErrorKind::InvalidArgument, "swap_retries must be at least 1");
}

const char* to_string(Method m) { return m == Method::Ils ? "ils" : "grasp"; }

SearchState::SearchState(std::shared_ptr<const Instance> inst, const Params& params, std::uint64_t seed)
    : inst_(std::move(inst)), params_(params), rng_(Rng::stream(seed, 11)), start_(std::chrono::steady_clock::now()) {
  params_.validate();
  mb.assign(inst_->num_machines(), 0);
}

double SearchState::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void SearchState::record(const std::string& phase, Time twct, Formulation kind) {
  if (best_seen_ < 0 || twct < best_seen_) best_seen_ = twct;
  log.events.push_back({elapsed(), nodes_, twct, best_seen_, phase, kind});
}

Schedule SearchState::optimize(const Schedule& sched, const std::set<Slot>& free_batches, Formulation kind) {
  std::set<int> free_ops;
  for (const auto& [k, b] : free_batches)
    if (b < static_cast<int>(sched.machines[k].size()))
      for (int i : sched.machines[k][b].ops) free_ops.insert(i);
  if (free_ops.empty()) return sched;

  Schedule warm = sched;
  BatchModel base;
  if (kind == Formulation::Wspt) {
    const Theta theta = Theta::from_schedule(sched, inst_->num_ops());
    const Precedence prec = wspt_order(*inst_, &theta);
    apply_precedence(warm, prec);
    base = build_model(inst_, {Formulation::Wspt, 0}, &prec);
  } else {
    if (!sequencing_) sequencing_ = std::make_unique<BatchModel>(build_model(inst_, {Formulation::Sequencing, 0}));
    base = *sequencing_;
  }
  SolveRequest req;
  req.model = restrict_and_fix(base, warm, free_batches, free_ops);
  req.warm_start = warm;
  req.time_limit = params_.sub_time_limit;
  req.node_limit = params_.sub_node_limit;
  const SolveResult res = params_.external_solver ? solve_external(req, params_.solver_command) : solve(req);
  nodes_ += res.nodes;
  ++sub_solves_;
  if (!res.incumbent) return sched;
  Schedule out = *res.incumbent;
  out.drop_empty();
  return twct_of(*inst_, out) < twct_of(*inst_, sched) ? out : sched;
}

void init_mb(SearchState& state, const Schedule& sched) {
  const Instance& inst = state.instance();
  for (int k = 0; k < inst.num_machines(); ++k) {
    const int slots = static_cast<int>(inst.ops_of_machine()[k].size());
    state.mb[k] = std::min(1 + static_cast<int>(sched.machines[k].size()), slots);
  }
}

void update_mb(SearchState& state, const Schedule& sched) {
  const Instance& inst = state.instance();
  for (int k = 0; k < inst.num_machines(); ++k) {
    const int used = static_cast<int>(sched.machines[k].size());
    if (used >= state.mb[k]) {
      const int slots = static_cast<int>(inst.ops_of_machine()[k].size());
      state.mb[k] = std::min(1 + used, slots);
    }
  }
}

int ceil_fraction(double fraction, int total) {
  return static_cast<int>(std::ceil(fraction * total - kEps));
}

Time window_size(double rho, Time cmax) {
  return std::max<Time>(1, static_cast<Time>(std::ceil(rho * static_cast<double>(cmax) - kEps)));
}

std::vector<std::pair<double, double>> window_ranges(Time cmax, Time range_size) {
  std::vector<std::pair<double, double>> out;
  const double rs = static_cast<double>(range_size);
  double r_begin = INFINITY, r_end = static_cast<double>(cmax);
  while (r_begin > 0) {
    r_begin = std::max(0.0, r_end - rs);
    out.emplace_back(r_begin, r_end);
    r_end = r_begin + rs / 2;
  }
  return out;
}

std::vector<int> relocate_sizes(int available, double phi) {
  const int nb = std::max(1, ceil_fraction(phi, available));
  std::vector<int> out;
  for (int left = available; left > 0; left -= nb) out.push_back(std::min(nb, left));
  return out;
}

std::set<Slot> window_slots(const Instance& inst, const Schedule& sched, const std::vector<int>& mb, double r_begin,
                            double r_end) {
  const auto ev = evaluate(inst, sched);
  std::set<Slot> out;
  for (int k = 0; k < inst.num_machines(); ++k) {
    const int used = static_cast<int>(sched.machines[k].size());
    const Time tail = used > 0 ? ev.batch_end(k, used - 1) : inst.machines[k].release;
    for (int b = 0; b < mb[k]; ++b) {
      const Time s = b < used ? ev.batch_start[k][b] : tail;
      const Time c = b < used ? ev.batch_end(k, b) : tail;
      if (s <= r_end && c >= r_begin) out.insert({k, b});
    }
  }
  return out;
}

Schedule batch_windows(SearchState& state, const Schedule& sched, Formulation kind) {
  const Instance& inst = state.instance();
  Schedule s = sched;
  const Time cmax = evaluate(inst, s).cmax;
  for (const auto& [r_begin, r_end] : window_ranges(cmax, window_size(state.params().rho, cmax))) {
    s = state.optimize(s, window_slots(inst, s, state.mb, r_begin, r_end), kind);
    update_mb(state, s);
  }
  return s;
}

Schedule multi_batches_relocate(SearchState& state, const Schedule& sched, Formulation kind) {
  const Instance& inst = state.instance();
  Schedule s = sched;
  std::vector<Slot> pool;
  for (int k = 0; k < inst.num_machines(); ++k)
    for (int b = 0; b < state.mb[k]; ++b) pool.push_back({k, b});
  const auto sizes = relocate_sizes(static_cast<int>(pool.size()), state.params().phi);
  state.rng().shuffle(pool);
  size_t at = 0;
  for (int size : sizes) {
    std::set<Slot> chosen(pool.begin() + at, pool.begin() + at + size);
    at += size;
    // slots past a shrunken machine's end are clamped to its first empty position
    std::set<Slot> free;
    for (const auto& [k, b] : chosen) {
      const int used = static_cast<int>(s.machines[k].size());
      free.insert({k, std::min(b, used)});
    }
    s = state.optimize(s, free, kind);
    update_mb(state, s);
  }
  return s;
}

Schedule vnd(SearchState& state, const Schedule& sched, Formulation kind) {
  const Instance& inst = state.instance();
  Schedule s = sched;
  Time f = twct_of(inst, s);
  for (;;) {
    Schedule r = multi_batches_relocate(state, s, kind);
    Time fr = twct_of(inst, r);
    if (fr < f) {
      s = std::move(r);
      f = fr;
      state.record("relocate", f, kind);
      continue;
    }
    Schedule w = batch_windows(state, s, kind);
    Time fw = twct_of(inst, w);
    if (fw < f) {
      s = std::move(w);
      f = fw;
      state.record("windows", f, kind);
      continue;
    }
    return s;
  }
}

BatchGrid to_grid(const Schedule& sched, const std::vector<int>& mb) {
  BatchGrid grid = sched.machines;
  for (size_t k = 0; k < grid.size(); ++k)
    if (static_cast<int>(grid[k].size()) < mb[k]) grid[k].resize(mb[k]);
  return grid;
}

Schedule from_grid(const BatchGrid& grid) {
  Schedule s;
  s.machines = grid;
  s.drop_empty();
  return s;
}

void swap_slots(BatchGrid& grid, Slot a, Slot b) { std::swap(grid[a.first][a.second], grid[b.first][b.second]); }

bool swap_feasible(const Instance& inst, const BatchGrid& grid, Slot a, Slot b) {
  auto fits = [&](const Batch& batch, int k) {
    int load = 0;
    for (int i : batch.ops) {
      if (!inst.eligible(i, k)) return false;
      load += inst.ops[i].load;
    }
    return load <= inst.machines[k].capacity;
  };
  return fits(grid[a.first][a.second], b.first) && fits(grid[b.first][b.second], a.first);
}

Schedule random_batch_swap(SearchState& state, const Schedule& sched) {
  const Instance& inst = state.instance();
  BatchGrid grid = to_grid(sched, state.mb);
  std::vector<Slot> slots;
  for (int k = 0; k < inst.num_machines(); ++k)
    for (int b = 0; b < static_cast<int>(grid[k].size()) && b < std::max(state.mb[k], 0); ++b) slots.push_back({k, b});
  if (slots.size() < 2) return sched;
  int total = 0;
  for (int v : state.mb) total += v;
  const int swaps = ceil_fraction(state.params().omega, total);
  auto& rng = state.rng();
  const auto n = static_cast<std::int64_t>(slots.size());
  for (int t = 0; t < swaps; ++t) {
    for (int attempt = 0; attempt < state.params().swap_retries; ++attempt) {
      const Slot a = slots[rng.uniform_int(0, n - 1)];
      const Slot b = slots[rng.uniform_int(0, n - 1)];
      if (a == b) continue;
      if (grid[a.first][a.second].ops.empty() && grid[b.first][b.second].ops.empty()) continue;
      if (!swap_feasible(inst, grid, a, b)) continue;
      swap_slots(grid, a, b);
      break;
    }
  }
  return from_grid(grid);
}

namespace {

struct Plan {
  Formulation main, final;
};

Plan plan_of(int variant) {
  switch (variant) {
    case 1: return {Formulation::Wspt, Formulation::Wspt};
    case 2: return {Formulation::Sequencing, Formulation::Sequencing};
    case 3: return {Formulation::Wspt, Formulation::Sequencing};
  }
  throw Error(ErrorKind::InvalidArgument, "variant must be 1, 2 or 3");
}

RunResult finish(SearchState& state, Schedule best, Time constructive) {
  RunResult r;
  r.twct = twct_of(state.instance(), best);
  r.schedule = std::move(best);
  r.constructive_twct = constructive;
  r.nodes = state.nodes();
  r.sub_solves = state.sub_solves();
  r.seconds = state.elapsed();
  r.log = std::move(state.log);
  return r;
}

}  // namespace

RunResult ils_math(std::shared_ptr<const Instance> inst, const Params& params, int variant, std::uint64_t seed) {
  const Plan plan = plan_of(variant);
  SearchState state(inst, params, seed);
  const Schedule s0 = wmct_wavga(*inst);
  const Time f0 = twct_of(*inst, s0);
  state.record("construct", f0, plan.main);
  init_mb(state, s0);
  Schedule s = vnd(state, s0, plan.main);
  Schedule best = s;
  Time f_best = twct_of(*inst, best);
  state.record("local_search", f_best, plan.main);
  int omega = 1;
  while (omega <= params.omega_max) {
    ++omega;
    const Schedule perturbed = random_batch_swap(state, s);
    state.record("perturb", twct_of(*inst, perturbed), plan.main);
    Schedule candidate = vnd(state, perturbed, plan.main);
    const Time fc = twct_of(*inst, candidate);
    if (static_cast<long double>(fc) < static_cast<long double>(f_best) * (1.0L + params.delta)) {
      s = std::move(candidate);
      state.record("accept", fc, plan.main);
      if (fc < f_best) {
        best = s;
        f_best = fc;
        omega = 1;
      }
    } else {
      s = best;
      state.record("reject", fc, plan.main);
    }
  }
  init_mb(state, best);
  state.record("intensify", f_best, plan.final);
  best = vnd(state, best, plan.final);
  state.record("final", twct_of(*inst, best), plan.final);
  return finish(state, std::move(best), f0);
}

RunResult grasp_math(std::shared_ptr<const Instance> inst, const Params& params, int variant, std::uint64_t seed) {
  const Plan plan = plan_of(variant);
  SearchState state(inst, params, seed);
  Rng build = Rng::stream(seed, 12);
  const Time f0 = twct_of(*inst, wmct_wavga(*inst));
  std::optional<Schedule> best;
  Time f_best = 0;
  int omega = 1;
  while (omega <= params.omega_max) {
    ++omega;
    const Schedule s = randomized_construct(*inst, params.rcl_alpha, build);
    state.record("construct", twct_of(*inst, s), plan.main);
    init_mb(state, s);
    Schedule candidate = vnd(state, s, plan.main);
    const Time fc = twct_of(*inst, candidate);
    state.record("local_search", fc, plan.main);
    if (!best || fc < f_best) {
      best = std::move(candidate);
      f_best = fc;
      omega = 1;
    }
  }
  init_mb(state, *best);
  state.record("intensify", f_best, plan.final);
  Schedule out = vnd(state, *best, plan.final);
  state.record("final", twct_of(*inst, out), plan.final);
  return finish(state, std::move(out), f0);
}

RunResult run_variant(std::shared_ptr<const Instance> inst, Method method, int variant, const Params& params,
                      std::uint64_t seed) {
  return method == Method::Ils ? ils_math(std::move(inst), params, variant, seed)
                               : grasp_math(std::move(inst), params, variant, seed);
}

}  // namespace plsv
