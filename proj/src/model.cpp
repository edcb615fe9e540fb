#include "plsv/model.hpp"

#include <algorithm>
#include <map>

namespace plsv {

const char* to_string(Formulation f) { return f == Formulation::Wspt ? "wspt" : "s"; }

Time default_big_m(const Instance& inst) {
  Time max_rk = 0, max_ri = 0, sum_p = 0, max_s = 0;
  for (const auto& m : inst.machines) max_rk = std::max(max_rk, m.release);
  for (const auto& op : inst.ops) {
    max_ri = std::max(max_ri, op.release);
    sum_p += op.processing;
  }
  for (const auto& f : inst.families) max_s = std::max(max_s, f.setup);
  Time slots = 0;
  for (const auto& ok : inst.ops_of_machine()) slots += static_cast<Time>(ok.size());
  return max_rk + max_ri + sum_p + slots * max_s;
}

CompatibilitySets::CompatibilitySets(const Instance& inst) : inst_(&inst), n_(inst.num_ops()) {
  pair_machines_.assign(static_cast<size_t>(n_) * n_, {});
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (a == b || inst.ops[a].family != inst.ops[b].family) continue;
      for (int k : inst.ops[a].eligible) {
        if (!inst.eligible(b, k)) continue;
        if (inst.ops[a].load + inst.ops[b].load <= inst.machines[k].capacity)
          pair_machines_[index(a, b)].push_back(k);
      }
    }
  }
}

bool CompatibilitySets::triplet(int a, int b, int c) const {
  if (a == b || b == c || a == c) return false;
  const auto& ops = inst_->ops;
  if (ops[a].family != ops[b].family || ops[a].family != ops[c].family) return false;
  for (int k : pair_machines(a, b)) {
    if (!inst_->eligible(c, k)) continue;
    if (ops[a].load + ops[b].load + ops[c].load <= inst_->machines[k].capacity) return true;
  }
  return false;
}

CompatibilitySets compatibility_sets(const Instance& inst) { return CompatibilitySets(inst); }

BatchModel::BatchModel(std::shared_ptr<const ModelStructure> st) : st_(std::move(st)) {
  const size_t n = st_->vars.size();
  lb_.assign(n, 0.0);
  ub_.assign(n, kInfinity);
  for (size_t v = 0; v < n; ++v)
    if (st_->vars[v].type == VarType::Binary) ub_[v] = 1.0;
}

namespace {

std::string name3(char c, int a, int b, int d) {
  return std::string(1, c) + "_" + std::to_string(a + 1) + "_" + std::to_string(b + 1) + "_" + std::to_string(d + 1);
}

struct Builder {
  ModelStructure& m;

  int var(std::string name, VarType t) {
    m.vars.push_back({std::move(name), t});
    return static_cast<int>(m.vars.size()) - 1;
  }
  void row(std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
    m.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  }
};

}  // namespace

BatchModel build_model(std::shared_ptr<const Instance> inst_ptr, const ModelConfig& cfg, const Precedence* prec) {
  if (!inst_ptr) throw Error(ErrorKind::InvalidArgument, "build_model: null instance");
  const Instance& inst = *inst_ptr;
  if (cfg.kind == Formulation::Wspt && (prec == nullptr || prec->num_ops() != inst.num_ops()))
    throw Error(ErrorKind::InvalidArgument, "build_model: the WSPT formulation needs precedence sets for every operation");

  auto st = std::make_shared<ModelStructure>();
  ModelStructure& m = *st;
  m.instance = inst_ptr;
  m.kind = cfg.kind;
  m.big_m = cfg.big_m > 0 ? cfg.big_m : default_big_m(inst);
  if (cfg.kind == Formulation::Wspt) m.precedence = *prec;
  m.compat = CompatibilitySets(inst);

  const int n = inst.num_ops(), nm = inst.num_machines(), nf = inst.num_families(), nj = inst.num_jobs();
  const Time big_m = m.big_m;
  for (int k = 0; k < nm; ++k) m.slots.push_back(static_cast<int>(inst.ops_of_machine()[k].size()));

  Builder bld{m};
  m.x.assign(n, std::vector<std::vector<int>>(nm));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < nm; ++k) {
      m.x[i][k].assign(m.slots[k], -1);
      if (!inst.eligible(i, k) || inst.ops[i].load > inst.machines[k].capacity) continue;
      for (int b = 0; b < m.slots[k]; ++b) m.x[i][k][b] = bld.var(name3('X', i, k, b), VarType::Binary);
    }
  m.y.assign(nf, std::vector<std::vector<int>>(nm));
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < nm; ++k)
      for (int b = 0; b < m.slots[k]; ++b) m.y[f][k].push_back(bld.var(name3('Y', f, k, b), VarType::Binary));
  m.z.assign(n, std::vector<int>(n, -1));
  if (cfg.kind == Formulation::Sequencing)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m.compat.pair(i, j))
          m.z[i][j] = bld.var("Z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), VarType::Binary);
  m.s.assign(nm, {});
  m.p.assign(nm, {});
  for (int k = 0; k < nm; ++k)
    for (int b = 0; b < m.slots[k]; ++b) {
      m.s[k].push_back(bld.var("S_" + std::to_string(k + 1) + "_" + std::to_string(b + 1), VarType::Continuous));
      m.p[k].push_back(bld.var("P_" + std::to_string(k + 1) + "_" + std::to_string(b + 1), VarType::Continuous));
    }
  for (int i = 0; i < n; ++i) m.c_op.push_back(bld.var("C_" + std::to_string(i + 1), VarType::Continuous));
  for (int j = 0; j < nj; ++j) m.c_job.push_back(bld.var("CJ_" + std::to_string(j + 1), VarType::Continuous));

  for (int j = 0; j < nj; ++j) m.objective.push_back({m.c_job[j], inst.jobs[j].weight});

  // every operation in exactly one batch
  for (int i = 0; i < n; ++i) {
    std::vector<Term> t;
    for (int k = 0; k < nm; ++k)
      for (int v : m.x[i][k])
        if (v >= 0) t.push_back({v, 1});
    bld.row("assign_" + std::to_string(i + 1), std::move(t), Sense::Equal, 1);
  }
  for (int k = 0; k < nm; ++k) {
    for (int b = 0; b < m.slots[k]; ++b) {
      const std::string kb = std::to_string(k + 1) + "_" + std::to_string(b + 1);
      std::vector<Term> fam, cap, proc;
      for (int f = 0; f < nf; ++f) fam.push_back({m.y[f][k][b], 1});
      bld.row("family_" + kb, std::move(fam), Sense::LessEq, 1);
      for (int i = 0; i < n; ++i) {
        const int v = m.x[i][k][b];
        if (v < 0) continue;
        bld.row("match_" + std::to_string(i + 1) + "_" + kb, {{v, 1}, {m.y[inst.ops[i].family][k][b], -1}},
                Sense::LessEq, 0);
        if (inst.ops[i].load > 0) cap.push_back({v, inst.ops[i].load});
        proc.push_back({v, -inst.ops[i].processing});
      }
      if (!cap.empty()) bld.row("capacity_" + kb, std::move(cap), Sense::LessEq, inst.machines[k].capacity);
      proc.push_back({m.p[k][b], 1});
      for (int f = 0; f < nf; ++f)
        if (inst.families[f].setup > 0) proc.push_back({m.y[f][k][b], -inst.families[f].setup});
      bld.row("proc_" + kb, std::move(proc), Sense::GreaterEq, 0);
      bld.row("mrel_" + kb, {{m.s[k][b], 1}}, Sense::GreaterEq, inst.machines[k].release);
      if (b + 1 < m.slots[k])
        bld.row("next_" + kb, {{m.s[k][b + 1], 1}, {m.s[k][b], -1}, {m.p[k][b], -1}}, Sense::GreaterEq, 0);
      for (int i = 0; i < n; ++i) {
        const int v = m.x[i][k][b];
        if (v < 0 || inst.ops[i].release == 0) continue;
        bld.row("orel_" + std::to_string(i + 1) + "_" + kb, {{m.s[k][b], 1}, {v, -inst.ops[i].release}},
                Sense::GreaterEq, 0);
      }
    }
  }

  // C_i - S - sum p X (or p Z) - M X_ik >= p_i + s_fi - M
  for (int i = 0; i < n; ++i) {
    const Time base = inst.ops[i].processing + inst.setup_of(i);
    std::vector<Term> zterms;
    if (cfg.kind == Formulation::Sequencing)
      for (int a = 0; a < n; ++a)
        if (m.z[a][i] >= 0) zterms.push_back({m.z[a][i], -inst.ops[a].processing});
    for (int k = 0; k < nm; ++k)
      for (int b = 0; b < m.slots[k]; ++b) {
        const int v = m.x[i][k][b];
        if (v < 0) continue;
        std::vector<Term> t{{m.c_op[i], 1}, {m.s[k][b], -1}};
        if (cfg.kind == Formulation::Wspt) {
          for (int a = 0; a < n; ++a)
            if (a != i && m.precedence.precedes(a, i) && m.x[a][k][b] >= 0)
              t.push_back({m.x[a][k][b], -inst.ops[a].processing});
        } else {
          t.insert(t.end(), zterms.begin(), zterms.end());
        }
        t.push_back({v, -big_m});
        bld.row("comp_" + std::to_string(i + 1) + "_" + std::to_string(k + 1) + "_" + std::to_string(b + 1),
                std::move(t), Sense::GreaterEq, base - big_m);
      }
  }
  for (int j = 0; j < nj; ++j)
    for (int i : inst.jobs[j].ops)
      bld.row("job_" + std::to_string(j + 1) + "_" + std::to_string(i + 1), {{m.c_job[j], 1}, {m.c_op[i], -1}},
              Sense::GreaterEq, 0);

  if (cfg.kind == Formulation::Sequencing) {
    for (int i = 0; i < n; ++i)
      for (int a = i + 1; a < n; ++a) {
        if (!m.compat.pair(i, a)) continue;
        const std::string ia = std::to_string(i + 1) + "_" + std::to_string(a + 1);
        for (int k : m.compat.pair_machines(i, a))
          for (int b = 0; b < m.slots[k]; ++b)
            bld.row("same_" + ia + "_" + std::to_string(k + 1) + "_" + std::to_string(b + 1),
                    {{m.z[i][a], 1}, {m.z[a][i], 1}, {m.x[i][k][b], -1}, {m.x[a][k][b], -1}}, Sense::GreaterEq, -1);
        bld.row("order_" + ia, {{m.z[i][a], 1}, {m.z[a][i], 1}}, Sense::LessEq, 1);
      }
    for (int i = 0; i < n; ++i)
      for (int a = i + 1; a < n; ++a) {
        if (!m.compat.pair(i, a)) continue;
        for (int c = a + 1; c < n; ++c) {
          if (!m.compat.triplet(i, a, c)) continue;
          const std::string iac = std::to_string(i + 1) + "_" + std::to_string(a + 1) + "_" + std::to_string(c + 1);
          bld.row("cycle_" + iac, {{m.z[i][a], 1}, {m.z[a][c], 1}, {m.z[c][i], 1}}, Sense::LessEq, 2);
          bld.row("cycler_" + iac, {{m.z[a][i], 1}, {m.z[c][a], 1}, {m.z[i][c], 1}}, Sense::LessEq, 2);
        }
      }
  }
  return BatchModel(st);
}

namespace {

// slot of every op in the incumbent; throws when the schedule does not fit the model
std::vector<Slot> slots_of(const BatchModel& model, const Schedule& sched) {
  const auto& st = model.structure();
  const Instance& inst = model.instance();
  if (sched.num_machines() != inst.num_machines())
    throw Error(ErrorKind::InvalidArgument, "schedule machine count does not match the instance");
  std::vector<Slot> at(inst.num_ops(), {-1, -1});
  for (int k = 0; k < sched.num_machines(); ++k) {
    const auto& batches = sched.machines[k];
    if (static_cast<int>(batches.size()) > st.slots[k])
      throw Error(ErrorKind::InvalidArgument, "machine " + std::to_string(k + 1) + " uses more batches than slots");
    for (int b = 0; b < static_cast<int>(batches.size()); ++b)
      for (int i : batches[b].ops) {
        if (i < 0 || i >= inst.num_ops() || at[i].first >= 0)
          throw Error(ErrorKind::InvalidArgument, "schedule lists operation " + std::to_string(i + 1) + " twice or out of range");
        if (st.x[i][k][b] < 0)
          throw Error(ErrorKind::InvalidArgument,
                      "operation " + std::to_string(i + 1) + " cannot run on machine " + std::to_string(k + 1));
        at[i] = {k, b};
      }
  }
  for (int i = 0; i < inst.num_ops(); ++i)
    if (at[i].first < 0) throw Error(ErrorKind::InvalidArgument, "schedule misses operation " + std::to_string(i + 1));
  return at;
}

}  // namespace

BatchModel restrict_and_fix(const BatchModel& model, const Schedule& incumbent, const std::set<Slot>& free_batches,
                            const std::set<int>& free_ops) {
  const auto& st = model.structure();
  const Instance& inst = model.instance();
  const auto at = slots_of(model, incumbent);
  for (const auto& [k, b] : free_batches)
    if (k < 0 || k >= inst.num_machines() || b < 0 || b >= st.slots[k])
      throw Error(ErrorKind::InvalidArgument, "free batch outside the model");
  for (int i = 0; i < inst.num_ops(); ++i) {
    const bool in_free_batch = free_batches.count(at[i]) > 0;
    if (in_free_batch != (free_ops.count(i) > 0))
      throw Error(ErrorKind::InvalidArgument, "operation " + std::to_string(i + 1) +
                                                  (in_free_batch ? " sits in a free batch but is not free"
                                                                 : " is free but not assigned to a free batch"));
  }
  for (int i : free_ops)
    if (i < 0 || i >= inst.num_ops()) throw Error(ErrorKind::InvalidArgument, "free operation out of range");

  BatchModel r = model;
  for (int i = 0; i < inst.num_ops(); ++i) {
    const bool free = free_ops.count(i) > 0;
    for (int k = 0; k < inst.num_machines(); ++k)
      for (int b = 0; b < st.slots[k]; ++b) {
        const int v = st.x[i][k][b];
        if (v < 0) continue;
        if (free) {
          if (free_batches.count({k, b}) == 0) r.fix(v, 0.0);
        } else {
          r.fix(v, at[i] == Slot{k, b} ? 1.0 : 0.0);
        }
      }
  }
  for (int k = 0; k < inst.num_machines(); ++k)
    for (int b = 0; b < st.slots[k]; ++b) {
      if (free_batches.count({k, b})) continue;
      const bool used = b < static_cast<int>(incumbent.machines[k].size());
      for (int f = 0; f < inst.num_families(); ++f)
        r.fix(st.y[f][k][b], used && incumbent.machines[k][b].family == f ? 1.0 : 0.0);
    }
  if (st.kind == Formulation::Sequencing) {
    const auto values = encode_schedule(model, incumbent);
    for (int i = 0; i < inst.num_ops(); ++i)
      for (int a = 0; a < inst.num_ops(); ++a) {
        const int v = st.z[i][a];
        if (v >= 0 && !free_ops.count(i) && !free_ops.count(a)) r.fix(v, static_cast<double>(values[v]));
      }
  }
  return r;
}

std::vector<std::int64_t> encode_schedule(const BatchModel& model, const Schedule& sched) {
  const auto& st = model.structure();
  const Instance& inst = model.instance();
  slots_of(model, sched);
  std::vector<std::int64_t> val(st.vars.size(), 0);
  std::vector<Time> c_op(inst.num_ops(), 0);
  for (int k = 0; k < inst.num_machines(); ++k) {
    const auto& batches = sched.machines[k];
    Time end = inst.machines[k].release;
    for (int b = 0; b < st.slots[k]; ++b) {
      if (b >= static_cast<int>(batches.size())) {
        val[st.s[k][b]] = end;
        continue;
      }
      const Batch& batch = batches[b];
      Time start = end, work = 0;
      for (int i : batch.ops) {
        start = std::max(start, inst.ops[i].release);
        work += inst.ops[i].processing;
        val[st.x[i][k][b]] = 1;
      }
      const Time setup = inst.families[batch.family].setup;
      val[st.y[batch.family][k][b]] = 1;
      val[st.s[k][b]] = start;
      val[st.p[k][b]] = setup + work;
      // C_i follows the formulation's own inner-order semantics
      for (size_t x = 0; x < batch.ops.size(); ++x) {
        const int i = batch.ops[x];
        Time before = 0;
        for (size_t y = 0; y < batch.ops.size(); ++y) {
          const int a = batch.ops[y];
          if (a == i) continue;
          const bool first = st.kind == Formulation::Wspt ? st.precedence.precedes(a, i) : y < x;
          if (first) before += inst.ops[a].processing;
          if (st.kind == Formulation::Sequencing && y < x) val[st.z[a][i]] = 1;
        }
        c_op[i] = start + setup + before + inst.ops[i].processing;
      }
      end = start + setup + work;
    }
  }
  for (int i = 0; i < inst.num_ops(); ++i) val[st.c_op[i]] = c_op[i];
  for (int j = 0; j < inst.num_jobs(); ++j) {
    Time c = 0;
    for (int i : inst.jobs[j].ops) c = std::max(c, c_op[i]);
    val[st.c_job[j]] = c;
  }
  return val;
}

std::vector<std::string> check_point(const BatchModel& model, const std::vector<std::int64_t>& values) {
  const auto& st = model.structure();
  std::vector<std::string> bad;
  if (values.size() != st.vars.size()) return {"value vector has wrong length"};
  for (int v = 0; v < model.num_vars(); ++v) {
    const auto x = static_cast<double>(values[v]);
    if (x < model.lower(v) || x > model.upper(v)) bad.push_back("bound " + st.vars[v].name);
  }
  for (const auto& c : st.constraints) {
    __int128 lhs = 0;
    for (const auto& t : c.terms) lhs += static_cast<__int128>(t.coef) * values[t.var];
    const bool ok = c.sense == Sense::LessEq ? lhs <= c.rhs : c.sense == Sense::GreaterEq ? lhs >= c.rhs : lhs == c.rhs;
    if (!ok) bad.push_back(c.name);
  }
  return bad;
}

std::int64_t objective_value(const BatchModel& model, const std::vector<std::int64_t>& values) {
  std::int64_t obj = 0;
  for (const auto& t : model.structure().objective) obj += t.coef * values[t.var];
  return obj;
}

Schedule decode_point(const BatchModel& model, const std::vector<std::int64_t>& values) {
  const auto& st = model.structure();
  const Instance& inst = model.instance();
  Schedule sched(inst.num_machines());
  for (int k = 0; k < inst.num_machines(); ++k)
    for (int b = 0; b < st.slots[k]; ++b) {
      Batch batch;
      for (int i = 0; i < inst.num_ops(); ++i) {
        const int v = st.x[i][k][b];
        if (v >= 0 && values[v] == 1) batch.ops.push_back(i);
      }
      if (batch.ops.empty()) continue;
      batch.family = inst.ops[batch.ops.front()].family;
      if (st.kind == Formulation::Sequencing) {
        std::map<int, int> preds;
        for (int i : batch.ops)
          for (int a : batch.ops)
            if (a != i && st.z[a][i] >= 0 && values[st.z[a][i]] == 1) ++preds[i];
        std::stable_sort(batch.ops.begin(), batch.ops.end(),
                         [&](int a, int c) { return preds[a] < preds[c]; });
      }
      sched.machines[k].push_back(std::move(batch));
    }
  if (st.kind == Formulation::Wspt) apply_precedence(sched, st.precedence);
  return sched;
}

}  // namespace plsv
