// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "plsv/bench.hpp"
#include "plsv/construct.hpp"
#include "plsv/instgen.hpp"
#include "plsv/model.hpp"
#include "plsv/oracle.hpp"
#include "plsv/precedence.hpp"
#include "plsv/search.hpp"
#include "plsv/subsolve.hpp"

using namespace plsv;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const Instance> gen(std::uint64_t seed, int ops, int machines) {
  GenParams g;
  g.num_ops = ops;
  g.num_machines = machines;
  g.seed = seed;
  return std::make_shared<const Instance>(generate(g));
}

// The seeded small instances both oracle checks share.
std::shared_ptr<const Instance> oracle_instance(std::uint64_t seed) {
  return gen(1000 + seed, 3 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2));
}

std::string data(const char* name) { return std::string(PLSV_DATA_DIR) + "/" + name; }

// Uniform random feasible schedule: random eligible machine, then a random
// compatible batch or a new batch at a random position.
Schedule random_schedule(const Instance& inst, Rng& rng) {
  Schedule s(inst.num_machines());
  std::vector<int> order(inst.num_ops());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  for (int i : order) {
    const auto& el = inst.ops[i].eligible;
    const int k = el[rng.uniform_int(0, static_cast<std::int64_t>(el.size()) - 1)];
    auto& bs = s.machines[k];
    std::vector<int> fits;
    for (int b = 0; b < static_cast<int>(bs.size()); ++b) {
      int load = inst.ops[i].load;
      for (int a : bs[b].ops) load += inst.ops[a].load;
      if (bs[b].family == inst.ops[i].family && load <= inst.machines[k].capacity) fits.push_back(b);
    }
    if (!fits.empty() && rng.bernoulli(0.5)) {
      auto& ops = bs[fits[rng.uniform_int(0, static_cast<std::int64_t>(fits.size()) - 1)]].ops;
      ops.insert(ops.begin() + rng.uniform_int(0, static_cast<std::int64_t>(ops.size())), i);
    } else {
      bs.insert(bs.begin() + rng.uniform_int(0, static_cast<std::int64_t>(bs.size())), Batch{inst.ops[i].family, {i}});
    }
  }
  return s;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why;
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  std::printf("criterion %d %s: %s (%s) [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.str().c_str(),
              since(t0));
  std::fflush(stdout);
  failures += !o.pass;
}

Precedence plain_wspt(const Instance& inst) { return wspt_order(inst); }

}  // namespace

int main() {
  report(1, "golden example", [](Outcome& o) {
    const Instance inst = read_instance(data("appendix_b.json"));
    const Schedule s = read_schedule(inst, data("figure1_schedule.json"));
    const auto t0 = Clock::now();
    const auto ev = evaluate(inst, s);
    const double ms = since(t0) * 1000;
    const std::vector<Time> expect{35, 60, 68, 54, 90};
    o.detail << "C=";
    for (size_t j = 0; j < ev.job_completion.size(); ++j) o.detail << (j ? "/" : "") << ev.job_completion[j];
    o.detail << " TWCT=" << ev.twct << " in " << ms << " ms";
    if (ev.job_completion != expect || ev.twct != 7634) o.fail(o.detail.str() + ", expected 35/60/68/54/90 and 7634");
    if (ms >= 1.0) o.fail(o.detail.str() + ", slower than 1 ms");
  });

  report(2, "oracle equivalence", [](Outcome& o) {
    const auto t0 = Clock::now();
    int matched = 0, ordered = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto inst = oracle_instance(seed);
      const Time opt = brute_force_optimum(*inst).twct;
      SolveRequest rs;
      rs.model = build_model(inst, {Formulation::Sequencing, 0});
      rs.time_limit = 60;
      const auto s = solve(rs);
      const Precedence prec = plain_wspt(*inst);
      SolveRequest rw;
      rw.model = build_model(inst, {Formulation::Wspt, 0}, &prec);
      rw.time_limit = 60;
      const auto w = solve(rw);
      if (s.status == SolveStatus::Optimal && s.objective == opt) ++matched;
      else o.fail("seed " + std::to_string(seed) + ": Batch-S " + std::to_string(s.objective) + " vs oracle " + std::to_string(opt));
      if (w.status == SolveStatus::Optimal && w.objective >= s.objective) ++ordered;
      else o.fail("seed " + std::to_string(seed) + ": Batch-WSPT below Batch-S or not optimal");
    }
    const double secs = since(t0);
    if (o.pass) o.detail << matched << "/50 match the oracle, " << ordered << "/50 with WSPT >= S, " << secs << " s";
    if (secs >= 120) o.fail("took " + std::to_string(secs) + " s");
  });

  report(3, "encoding soundness", [](Outcome& o) {
    Rng rng(2024);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
      const int ops = 5 + t % 21;  // 5..25
      const auto inst = gen(3000 + t, ops, 2 + t % 3);
      const Schedule s = t % 2 ? random_schedule(*inst, rng) : randomized_construct(*inst, 1.0, rng);
      const Time twct = evaluate(*inst, s).twct;
      const Theta theta = Theta::from_schedule(s, inst->num_ops());
      const Precedence prec = wspt_order(*inst, &theta);
      for (const BatchModel& m :
           {build_model(inst, {Formulation::Sequencing, 0}), build_model(inst, {Formulation::Wspt, 0}, &prec)}) {
        const auto values = encode_schedule(m, s);
        const auto bad = check_point(m, values);
        if (!bad.empty()) o.fail("schedule " + std::to_string(t) + " (" + to_string(m.kind()) + ") violates " + bad.front());
        else if (objective_value(m, values) != twct) o.fail("schedule " + std::to_string(t) + ": objective differs");
        else ++checked;
      }
    }
    if (o.pass) o.detail << "200 schedules x 2 formulations, " << checked << " exact";
  });

  report(4, "monotone search", [](Outcome& o) {
    Params p;
    p.sub_node_limit = 5000;
    int calls = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto inst = gen(4000 + seed, 15, 3 + static_cast<int>(seed % 2));
      const Formulation kind = seed % 2 ? Formulation::Wspt : Formulation::Sequencing;
      SearchState state(inst, p, seed);
      Rng rng(seed);
      const Schedule start = randomized_construct(*inst, 0.5, rng);
      const Time f = evaluate(*inst, start).twct;
      using Fn = Schedule (*)(SearchState&, const Schedule&, Formulation);
      for (Fn fn : {static_cast<Fn>(vnd), static_cast<Fn>(batch_windows), static_cast<Fn>(multi_batches_relocate)}) {
        init_mb(state, start);
        const Schedule out = fn(state, start, kind);
        ++calls;
        if (!check_feasibility(*inst, out).empty()) o.fail("seed " + std::to_string(seed) + ": infeasible output");
        else if (evaluate(*inst, out).twct > f) o.fail("seed " + std::to_string(seed) + ": twct increased");
      }
    }
    int accepted = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = ils_math(gen(4200 + seed, 15, 4), p, 1 + static_cast<int>(seed % 3), seed);
      std::optional<Time> last;
      for (const auto& e : r.log.events) {
        if (e.phase != "accept") continue;
        if (last && e.twct >= *last) o.fail("ILS seed " + std::to_string(seed) + ": accepted twct not decreasing");
        last = e.twct;
        ++accepted;
      }
    }
    if (o.pass) o.detail << calls << " neighborhood calls non-worsening, " << accepted << " ILS acceptances strictly decreasing";
  });

  report(5, "iteration structure", [](Outcome& o) {
    const std::vector<std::pair<double, double>> ranges{{60, 90}, {45, 75}, {30, 60}, {15, 45}, {0, 30}};
    if (window_ranges(90, 30) != ranges) o.fail("window ranges differ");
    if (relocate_sizes(17, 0.30) != std::vector<int>{6, 6, 5}) o.fail("relocate sizes differ");
    const auto inst = std::make_shared<const Instance>(read_instance(data("appendix_b.json")));
    const Schedule s = read_schedule(*inst, data("figure1_schedule.json"));
    SearchState state(inst, Params{}, 1);
    init_mb(state, s);
    if (state.mb[0] != 4) o.fail("MB_1 = " + std::to_string(state.mb[0]));
    const int total = std::accumulate(state.mb.begin(), state.mb.end(), 0);
    if (o.pass) o.detail << "5 windows (60,90)..(0,30); relocate 6/6/5 over " << total << " batches; MB_1 = 4";
  });

  report(6, "matheuristic quality", [](Outcome& o) {
    const Params table1;  // rho .20, phi .30, omega .10, delta 0, alpha .10, omega_max 10, 1 s sub-solves
    double slowest = 0;
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto inst = gen(6000 + seed, 15, 4);
      const Time greedy = evaluate(*inst, wmct_wavga(*inst)).twct;
      for (Method m : {Method::Ils, Method::Grasp}) {
        const auto r = run_variant(inst, m, 3, table1, seed);
        ++runs;
        slowest = std::max(slowest, r.seconds);
        if (!check_feasibility(*inst, r.schedule).empty()) o.fail(std::string(to_string(m)) + " infeasible");
        if (r.twct > greedy)
          o.fail(std::string(to_string(m)) + "3 seed " + std::to_string(seed) + ": " + std::to_string(r.twct) +
                 " above constructive " + std::to_string(greedy));
        if (r.seconds >= 120) o.fail(std::string(to_string(m)) + "3 seed " + std::to_string(seed) + " took " + std::to_string(r.seconds) + " s");
      }
    }
    int hits[2] = {0, 0};
    const int small = 50;
    for (std::uint64_t seed = 1; seed <= small; ++seed) {
      const auto inst = oracle_instance(seed);
      const Time opt = brute_force_optimum(*inst).twct;
      for (Method m : {Method::Ils, Method::Grasp}) {
        const auto r = run_variant(inst, m, 3, table1, seed);
        if (r.twct < opt) o.fail("below the oracle optimum");
        hits[m == Method::Grasp] += r.twct == opt;
      }
    }
    for (int m = 0; m < 2; ++m)
      if (hits[m] * 10 < small * 9)
        o.fail(std::string(m ? "grasp" : "ils") + "3 hit the optimum on " + std::to_string(hits[m]) + "/" + std::to_string(small));
    if (o.pass)
      o.detail << runs << " runs never above WMCT-WAVGA, slowest " << slowest << " s; optimum hit ILS " << hits[0] << "/"
               << small << ", GRASP " << hits[1] << "/" << small;
  });

  report(7, "determinism", [](Outcome& o) {
    GenParams g;
    g.seed = 77;
    if (instance_to_json(generate(g)) != instance_to_json(generate(g))) o.fail("instances differ");
    Params p;
    p.sub_node_limit = 3000;
    const auto inst = gen(7000, 15, 4);
    for (Method m : {Method::Ils, Method::Grasp})
      if (schedule_to_json(run_variant(inst, m, 3, p, 5).schedule) != schedule_to_json(run_variant(inst, m, 3, p, 5).schedule))
        o.fail(std::string(to_string(m)) + " schedules differ");
    BenchConfig cfg;
    cfg.instances = {{"a", gen(7001, 8, 2)}, {"b", gen(7002, 10, 3)}};
    cfg.methods = {parse_method("ils3"), parse_method("grasp3")};
    cfg.runs = 3;
    cfg.deterministic = true;
    cfg.params.sub_node_limit = 1000;
    const auto r1 = run_bench(cfg), r2 = run_bench(cfg);
    if (runs_csv(r1) + aggregate_csv(r1) + evolution_csv(r1) != runs_csv(r2) + aggregate_csv(r2) + evolution_csv(r2))
      o.fail("bench reports differ");
#ifdef PLSV_CLI
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "plsv_acceptance_bench";
    std::string files[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / std::to_string(rep);
      fs::remove_all(out);
      const std::string cmd = std::string(PLSV_CLI) + " --seed 5 bench --grid 6x2 --methods ils1,grasp2 --runs 2 --deterministic -o " +
                              out.string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) o.fail("command-line bench failed");
      for (const char* f : {"runs.csv", "aggregate.csv", "evolution.csv"}) files[rep] += read_text_file((out / f).string());
    }
    fs::remove_all(dir);
    if (files[0] != files[1] || files[0].empty()) o.fail("command-line bench reports differ");
#endif
    if (o.pass) o.detail << "instances, schedules and bench reports byte-identical across repeated runs";
  });

  report(8, "GRASP degeneracy", [](Outcome& o) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto inst = gen(8000 + seed, 15 + 5 * static_cast<int>(seed % 3), 2 + static_cast<int>(seed % 3));
      Rng rng(seed);
      if (!(randomized_construct(*inst, 0.0, rng) == wmct_wavga(*inst))) o.fail("instance " + std::to_string(seed) + " differs");
    }
    if (o.pass) o.detail << "rcl_alpha = 0 equals WMCT-WAVGA on 20 instances";
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
