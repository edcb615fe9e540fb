#include "plsv/subsolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <unistd.h>

namespace plsv {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeLimit: return "feasible_time_limit";
    case SolveStatus::InfeasibleProven: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr Time kInf = std::numeric_limits<Time>::max() / 4;

using Clock = std::chrono::steady_clock;

class BranchAndBound {
public:
  BranchAndBound(const SolveRequest& req) : req_(req), model_(req.model), st_(model_.structure()), inst_(model_.instance()) {}

  SolveResult run() {
    start_ = Clock::now();
    SolveResult res;
    if (req_.warm_start) {
      const auto values = encode_schedule(model_, *req_.warm_start);
      const auto bad = check_point(model_, values);
      if (!bad.empty())
        throw Error(ErrorKind::InvalidArgument, "warm start violates the model: " + bad.front());
      best_ = *req_.warm_start;
      ub_ = objective_value(model_, values);
    }
    if (!prepare()) {
      res.status = best_ ? SolveStatus::Optimal : SolveStatus::InfeasibleProven;
      finish(res, true, 0);
      return res;
    }
    const Time root = lower_bound();
    bool complete = true;
    if (root < ub_) complete = dfs(0);
    finish(res, complete, root);
    return res;
  }

private:
  struct Segment {
    int machine = 0;
    bool locked = false;
    int room = 1;               // number of slots
    std::vector<int> slots;     // model slot indices
    std::vector<char> fam_ok;   // per family
  };
  struct BatchState {
    int seg = 0;
    int family = -1;
    int load = 0;
    Time rel = 0;
    Time work = 0;
    std::vector<int> ops;
  };
  struct Child {
    int k, index, pos, seg;
    bool fresh;
    Time lb;
  };

  bool zallow(int a, int i) const {
    const int v = st_.z[a][i];
    if (v < 0 || model_.upper(v) < 0.5) return false;
    const int w = st_.z[i][a];
    return w < 0 || model_.lower(w) < 0.5;
  }

  // Derives segments and the decision list from the bounds. False when the bounds
  // admit no point.
  bool prepare() {
    const int n = inst_.num_ops(), nm = inst_.num_machines(), nf = inst_.num_families();
    const bool seq = st_.kind == Formulation::Sequencing;
    std::vector<Slot> fixed_at(n, {-1, -1});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < nm; ++k)
        for (int b = 0; b < st_.slots[k]; ++b) {
          const int v = st_.x[i][k][b];
          if (v < 0 || model_.lower(v) < 0.5) continue;
          if (fixed_at[i].first >= 0) return false;
          fixed_at[i] = {k, b};
        }
    if (seq)
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) {
          const int v = st_.z[i][a];
          if (v < 0 || model_.lower(v) < 0.5) continue;
          if (fixed_at[i].first < 0 || fixed_at[i] != fixed_at[a])
            throw Error(ErrorKind::InvalidArgument, "built-in solver: a fixed Z needs both operations fixed in one batch");
        }

    c_.assign(n, -1);
    placed_.assign(n, false);
    forced_batch_.assign(n, -1);
    cand_segs_.assign(n, {});
    mach_.assign(nm, {});
    machine_segs_.assign(nm, {});
    bstart_.assign(nm, {});
    bend_.assign(nm, {});

    for (int k = 0; k < nm; ++k) {
      int open_run = -1;
      std::vector<char> open_cand;
      for (int b = 0; b < st_.slots[k]; ++b) {
        std::vector<int> fixed;
        std::vector<char> cand(n, 0), fam_ok(nf, 0);
        int forced_family = -1;
        for (int f = 0; f < nf; ++f) {
          const int v = st_.y[f][k][b];
          fam_ok[f] = model_.upper(v) > 0.5;
          if (model_.lower(v) > 0.5) {
            if (forced_family >= 0) return false;
            forced_family = f;
          }
        }
        bool any = false;
        for (int i = 0; i < n; ++i) {
          const int v = st_.x[i][k][b];
          if (v < 0) continue;
          if (fixed_at[i] == Slot{k, b}) {
            fixed.push_back(i);
          } else if (fixed_at[i].first < 0 && model_.upper(v) > 0.5 && fam_ok[inst_.ops[i].family]) {
            cand[i] = 1;
            any = true;
          }
        }
        if (!fixed.empty() || forced_family >= 0) {
          BatchState bs;
          bs.family = forced_family >= 0 ? forced_family : inst_.ops[fixed.front()].family;
          if (!fam_ok[bs.family]) return false;
          for (int i : fixed) {
            if (inst_.ops[i].family != bs.family) return false;
            bs.load += inst_.ops[i].load;
            bs.rel = std::max(bs.rel, inst_.ops[i].release);
            bs.work += inst_.ops[i].processing;
          }
          if (bs.load > inst_.machines[k].capacity) return false;
          Segment sg;
          sg.machine = k;
          sg.locked = true;
          sg.slots = {b};
          sg.fam_ok.assign(nf, 0);
          sg.fam_ok[bs.family] = 1;
          const int id = add_segment(sg, cand);
          bs.seg = id;
          seg_batches_[id] = 1;
          if (seq) {
            for (int i : fixed) forced_batch_[i] = id, forced_.push_back(i);
          } else {
            bs.ops = fixed;
            for (int i : fixed) placed_[i] = true;
          }
          mach_[k].push_back(std::move(bs));
          open_run = -1;
          continue;
        }
        if (!any) continue;  // always empty
        if (open_run >= 0 && open_cand == cand && segs_[open_run].fam_ok == fam_ok) {
          segs_[open_run].room++;
          segs_[open_run].slots.push_back(b);
          continue;
        }
        Segment sg;
        sg.machine = k;
        sg.fam_ok = fam_ok;
        sg.slots = {b};
        open_run = add_segment(sg, cand);
        open_cand = cand;
      }
    }

    for (int i = 0; i < n; ++i)
      if (fixed_at[i].first < 0) {
        if (cand_segs_[i].empty()) return false;
        free_.push_back(i);
      }
    // decisions: forced positions first, then free operations in the order of the
    // warm start (chronological), otherwise by release date
    std::vector<Time> key(n, 0);
    if (best_) {
      const auto ev = evaluate(inst_, *best_);
      for (int i = 0; i < n; ++i) key[i] = ev.op_completion[i];
    } else {
      for (int i = 0; i < n; ++i) key[i] = inst_.ops[i].release + inst_.ops[i].processing;
    }
    std::stable_sort(free_.begin(), free_.end(), [&](int a, int b) { return key[a] < key[b]; });
    std::stable_sort(forced_.begin(), forced_.end(), [&](int a, int b) { return key[a] < key[b]; });
    order_ = forced_;
    order_.insert(order_.end(), free_.begin(), free_.end());
    for (int k = 0; k < nm; ++k) retime(k);
    return true;
  }

  int add_segment(const Segment& sg, const std::vector<char>& cand) {
    const int id = static_cast<int>(segs_.size());
    segs_.push_back(sg);
    seg_batches_.push_back(0);
    machine_segs_[sg.machine].push_back(id);
    for (size_t i = 0; i < cand.size(); ++i)
      if (cand[i]) cand_segs_[i].push_back(id);
    return id;
  }

  int first_batch(int seg) const {
    int idx = 0;
    for (int s : machine_segs_[segs_[seg].machine]) {
      if (s == seg) return idx;
      idx += seg_batches_[s];
    }
    return idx;
  }

  void retime(int k) {
    const bool seq = st_.kind == Formulation::Sequencing;
    auto& batches = mach_[k];
    bstart_[k].resize(batches.size());
    bend_[k].resize(batches.size());
    Time end = inst_.machines[k].release;
    for (size_t t = 0; t < batches.size(); ++t) {
      const auto& bs = batches[t];
      const Time start = std::max(end, bs.rel);
      const Time setup = inst_.families[bs.family].setup;
      Time cum = start + setup;
      for (int i : bs.ops) {
        if (seq) {
          cum += inst_.ops[i].processing;
          c_[i] = cum;
        } else {
          Time c = start + setup + inst_.ops[i].processing;
          for (int a : bs.ops)
            if (a != i && st_.precedence.precedes(a, i)) c += inst_.ops[a].processing;
          c_[i] = c;
        }
      }
      end = start + setup + bs.work;
      bstart_[k][t] = start;
      bend_[k][t] = end;
    }
  }

  Time op_bound(int i) const {
    const auto& op = inst_.ops[i];
    const Time s = inst_.setup_of(i);
    if (forced_batch_[i] >= 0) {
      const int seg = forced_batch_[i];
      const int k = segs_[seg].machine;
      return bstart_[k][first_batch(seg)] + s + op.processing;
    }
    Time best = kInf;
    for (int seg : cand_segs_[i]) {
      const auto& sg = segs_[seg];
      const int k = sg.machine;
      const int fb = first_batch(seg);
      const int cnt = seg_batches_[seg];
      const int q = inst_.machines[k].capacity;
      if (!sg.locked && cnt < sg.room && sg.fam_ok[op.family]) {
        const Time seg_start = fb == 0 ? inst_.machines[k].release : bend_[k][fb - 1];
        best = std::min(best, std::max(seg_start, op.release) + s + op.processing);
        continue;
      }
      for (int t = fb; t < fb + cnt; ++t) {
        const auto& bs = mach_[k][t];
        if (bs.family != op.family || bs.load + op.load > q) continue;
        best = std::min(best, std::max(bstart_[k][t], op.release) + s + op.processing);
      }
    }
    return best;
  }

  Time lower_bound() const {
    Time total = 0;
    for (int j = 0; j < inst_.num_jobs(); ++j) {
      Time c = 0;
      for (int i : inst_.jobs[j].ops) {
        const Time t = placed_[i] ? c_[i] : op_bound(i);
        if (t >= kInf) return kInf;
        c = std::max(c, t);
      }
      total += inst_.jobs[j].weight * c;
    }
    return total;
  }

  // returns the previous release date of the target batch for undo
  Time apply(const Child& ch, int i) {
    auto& batches = mach_[ch.k];
    if (ch.fresh) {
      BatchState bs;
      bs.seg = ch.seg;
      bs.family = inst_.ops[i].family;
      batches.insert(batches.begin() + ch.index, std::move(bs));
      seg_batches_[ch.seg]++;
    }
    auto& bs = batches[ch.index];
    bs.ops.insert(bs.ops.begin() + ch.pos, i);
    const Time old_rel = bs.rel;
    if (forced_batch_[i] < 0) {
      bs.load += inst_.ops[i].load;
      bs.work += inst_.ops[i].processing;
      bs.rel = std::max(bs.rel, inst_.ops[i].release);
    }
    placed_[i] = true;
    retime(ch.k);
    return old_rel;
  }

  void undo(const Child& ch, int i, Time old_rel) {
    auto& batches = mach_[ch.k];
    auto& bs = batches[ch.index];
    bs.ops.erase(bs.ops.begin() + ch.pos);
    if (forced_batch_[i] < 0) {
      bs.load -= inst_.ops[i].load;
      bs.work -= inst_.ops[i].processing;
    }
    bs.rel = old_rel;
    placed_[i] = false;
    c_[i] = -1;
    if (ch.fresh) {
      batches.erase(batches.begin() + ch.index);
      seg_batches_[ch.seg]--;
    }
    retime(ch.k);
  }

  void positions(const BatchState& bs, int i, int k, int index, int seg, bool fresh, std::vector<Child>& out) const {
    if (st_.kind == Formulation::Wspt) {
      out.push_back({k, index, static_cast<int>(bs.ops.size()), seg, fresh, 0});
      return;
    }
    const int m = static_cast<int>(bs.ops.size());
    for (int pos = 0; pos <= m; ++pos) {
      bool ok = true;
      for (int x = 0; x < m && ok; ++x) ok = x < pos ? zallow(bs.ops[x], i) : zallow(i, bs.ops[x]);
      if (ok) out.push_back({k, index, pos, seg, fresh, 0});
    }
  }

  std::vector<Child> children(int i) const {
    std::vector<Child> out;
    const auto& op = inst_.ops[i];
    if (forced_batch_[i] >= 0) {
      const int seg = forced_batch_[i];
      const int k = segs_[seg].machine;
      const int fb = first_batch(seg);
      positions(mach_[k][fb], i, k, fb, seg, false, out);
      return out;
    }
    for (int seg : cand_segs_[i]) {
      const auto& sg = segs_[seg];
      const int k = sg.machine;
      const int fb = first_batch(seg);
      const int cnt = seg_batches_[seg];
      for (int t = fb; t < fb + cnt; ++t) {
        const auto& bs = mach_[k][t];
        if (bs.family != op.family || bs.load + op.load > inst_.machines[k].capacity) continue;
        positions(bs, i, k, t, seg, false, out);
      }
      if (!sg.locked && cnt < sg.room && sg.fam_ok[op.family])
        for (int t = fb; t <= fb + cnt; ++t) out.push_back({k, t, 0, seg, true, 0});
    }
    return out;
  }

  bool out_of_budget() {
    if (req_.node_limit > 0 && nodes_ >= req_.node_limit) return true;
    if (req_.time_limit > 0 && (nodes_ & 63) == 0) {
      const double el = std::chrono::duration<double>(Clock::now() - start_).count();
      if (el >= req_.time_limit) timed_out_ = true;
    }
    return timed_out_;
  }

  // false when the search stopped on a limit
  bool dfs(size_t depth) {
    if (depth == order_.size()) {
      const Time obj = lower_bound();
      if (obj < ub_) {
        ub_ = obj;
        best_ = snapshot();
      }
      return true;
    }
    const int i = order_[depth];
    auto kids = children(i);
    for (auto& ch : kids) {
      const Time old_rel = apply(ch, i);
      ch.lb = lower_bound();
      undo(ch, i, old_rel);
    }
    std::stable_sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) { return a.lb < b.lb; });
    for (const auto& ch : kids) {
      if (ch.lb >= ub_) break;
      ++nodes_;
      if (out_of_budget()) return false;
      const Time old_rel = apply(ch, i);
      const bool done = lower_bound() >= ub_ || dfs(depth + 1);
      undo(ch, i, old_rel);
      if (!done) return false;
    }
    return true;
  }

  Schedule snapshot() const {
    Schedule s(inst_.num_machines());
    for (int k = 0; k < inst_.num_machines(); ++k)
      for (const auto& bs : mach_[k])
        if (!bs.ops.empty()) s.machines[k].push_back(Batch{bs.family, bs.ops});
    if (st_.kind == Formulation::Wspt) apply_precedence(s, st_.precedence);
    return s;
  }

  void finish(SolveResult& res, bool complete, Time root) {
    res.nodes = nodes_;
    res.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    res.incumbent = best_;
    if (best_) {
      res.objective = ub_;
      if (complete) {
        res.status = SolveStatus::Optimal;
        res.bound = ub_;
      } else {
        res.status = SolveStatus::FeasibleTimeLimit;
        res.bound = std::min(root, ub_);
      }
    } else {
      res.status = complete ? SolveStatus::InfeasibleProven : SolveStatus::Unknown;
      res.bound = root >= kInf ? 0 : root;
    }
  }

  const SolveRequest& req_;
  const BatchModel& model_;
  const ModelStructure& st_;
  const Instance& inst_;
  Clock::time_point start_;

  std::vector<Segment> segs_;
  std::vector<int> seg_batches_;
  std::vector<std::vector<int>> machine_segs_;
  std::vector<std::vector<BatchState>> mach_;
  std::vector<std::vector<Time>> bstart_, bend_;
  std::vector<std::vector<int>> cand_segs_;
  std::vector<int> forced_batch_;  // Batch-S: fixed members still to be positioned
  std::vector<int> forced_, free_, order_;
  std::vector<Time> c_;
  std::vector<bool> placed_;

  std::optional<Schedule> best_;
  Time ub_ = kInf;
  std::int64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

SolveResult solve(const SolveRequest& req) {
  BranchAndBound bb(req);
  return bb.run();
}

namespace {

void write_terms(std::ostream& out, const ModelStructure& st, const std::vector<Term>& terms) {
  size_t width = 0;
  bool first = true;
  for (const auto& t : terms) {
    std::ostringstream piece;
    if (t.coef < 0)
      piece << (first ? "-" : " - ");
    else if (!first)
      piece << " + ";
    const auto mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) piece << mag << ' ';
    piece << st.vars[t.var].name;
    const std::string s = piece.str();
    if (width + s.size() > 200) {
      out << "\n   ";
      width = 0;
    }
    out << s;
    width += s.size();
    first = false;
  }
  if (terms.empty()) out << "0 " << st.vars.front().name;
}

}  // namespace

void export_lp(const BatchModel& model, std::ostream& out) {
  const auto& st = model.structure();
  out << "\\ " << (st.kind == Formulation::Wspt ? "Batch-WSPT" : "Batch-S") << " model, " << st.vars.size()
      << " variables, " << st.constraints.size() << " constraints\n";
  out << "Minimize\n obj: ";
  write_terms(out, st, st.objective);
  out << "\nSubject To\n";
  for (const auto& c : st.constraints) {
    out << ' ' << c.name << ": ";
    write_terms(out, st, c.terms);
    out << (c.sense == Sense::LessEq ? " <= " : c.sense == Sense::GreaterEq ? " >= " : " = ") << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    const double lo = model.lower(v), hi = model.upper(v);
    const auto& name = st.vars[v].name;
    if (st.vars[v].type == VarType::Binary) {
      if (lo == hi) out << ' ' << name << " = " << static_cast<long long>(lo) << '\n';
    } else if (lo == hi) {
      out << ' ' << name << " = " << lo << '\n';
    } else if (hi != kInfinity || lo != 0.0) {
      out << ' ' << lo << " <= " << name << " <= ";
      if (hi == kInfinity)
        out << "+inf\n";
      else
        out << hi << '\n';
    }
  }
  out << "Binaries\n";
  for (const auto& v : st.vars)
    if (v.type == VarType::Binary) out << ' ' << v.name << '\n';
  out << "End\n";
}

void export_model(const BatchModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  export_lp(model, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::optional<VarName> parse_var_name(const std::string& name) {
  VarName v;
  std::string rest;
  int expected = 0;
  if (name.rfind("CJ_", 0) == 0) {
    v.kind = 'J';
    rest = name.substr(3);
    expected = 1;
  } else if (name.size() > 2 && name[1] == '_') {
    v.kind = name[0];
    rest = name.substr(2);
    switch (v.kind) {
      case 'X': case 'Y': expected = 3; break;
      case 'Z': case 'S': case 'P': expected = 2; break;
      case 'C': expected = 1; break;
      default: return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  std::vector<int> idx;
  std::stringstream ss(rest);
  std::string part;
  while (std::getline(ss, part, '_')) {
    if (part.empty() || part.size() > 9 || !std::all_of(part.begin(), part.end(), ::isdigit)) return std::nullopt;
    const int x = std::stoi(part);
    if (x < 1) return std::nullopt;
    idx.push_back(x - 1);
  }
  if (static_cast<int>(idx.size()) != expected) return std::nullopt;
  v.a = idx[0];
  if (expected > 1) v.b = idx[1];
  if (expected > 2) v.c = idx[2];
  return v;
}

std::string format_var_name(const VarName& v) {
  std::string s = v.kind == 'J' ? "CJ" : std::string(1, v.kind);
  for (int x : {v.a, v.b, v.c})
    if (x >= 0) s += "_" + std::to_string(x + 1);
  return s;
}

SolveResult solve_external(const SolveRequest& req, const std::string& command) {
  const auto t0 = Clock::now();
  const auto& model = req.model;
  const auto& st = model.structure();
  SolveResult res;
  std::optional<Time> warm_obj;
  if (req.warm_start) {
    const auto values = encode_schedule(model, *req.warm_start);
    if (!check_point(model, values).empty()) throw Error(ErrorKind::InvalidArgument, "warm start violates the model");
    warm_obj = objective_value(model, values);
  }

  namespace fs = std::filesystem;
  static std::atomic<int> counter{0};
  const auto dir = fs::temp_directory_path();
  const std::string stem = "plsv_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto lp = (dir / (stem + ".lp")).string();
  const auto sol = (dir / (stem + ".sol")).string();
  export_model(model, lp);
  std::ostringstream cmd;
  cmd << command << " '" << lp << "' '" << sol << "' " << (req.time_limit > 0 ? req.time_limit : 1e9);
  const int rc = std::system(cmd.str().c_str());

  std::unordered_map<std::string, int> by_name;
  for (int v = 0; v < model.num_vars(); ++v) by_name[st.vars[v].name] = v;
  std::vector<std::int64_t> values(st.vars.size(), 0);
  std::string status;
  bool have_values = false;
  std::ifstream in(sol);
  if (rc == 0 && in) {
    std::string name;
    double x;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      if (!(ls >> name)) continue;
      if (name == "status") {
        ls >> status;
        continue;
      }
      if (!(ls >> x)) continue;
      auto it = by_name.find(name);
      if (it == by_name.end()) continue;
      values[it->second] = static_cast<std::int64_t>(std::llround(x));
      have_values = true;
    }
  }
  std::error_code ec;
  fs::remove(lp, ec);
  fs::remove(sol, ec);

  std::optional<Schedule> found;
  Time found_obj = 0;
  if (have_values) {
    try {
      Schedule s = decode_point(model, values);
      const auto enc = encode_schedule(model, s);
      if (check_point(model, enc).empty()) {
        found = s;
        found_obj = objective_value(model, enc);
      }
    } catch (const Error&) {
    }
  }
  if (found && (!warm_obj || found_obj <= *warm_obj)) {
    res.incumbent = found;
    res.objective = found_obj;
  } else if (req.warm_start) {
    res.incumbent = req.warm_start;
    res.objective = *warm_obj;
  }
  if (res.incumbent) {
    const bool opt = status == "Optimal" && found && found_obj <= res.objective;
    res.status = opt ? SolveStatus::Optimal : SolveStatus::FeasibleTimeLimit;
    res.bound = opt ? res.objective : 0;
  } else {
    res.status = status == "Infeasible" ? SolveStatus::InfeasibleProven : SolveStatus::Unknown;
  }
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace plsv
