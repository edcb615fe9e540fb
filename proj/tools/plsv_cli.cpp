// Command-line front end. Talks to the solver only through the C API.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "plsv/plsv.h"

namespace fs = std::filesystem;

namespace {

struct Failure {
  plsv_status status;
  std::string message;
};

void check(plsv_status s) {
  if (s != PLSV_OK) throw Failure{s, plsv_last_error()};
}

[[noreturn]] void fail(plsv_status s, const std::string& msg) { throw Failure{s, msg}; }

// Owning wrappers for the opaque handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    std::swap(p, o.p);
    return *this;
  }
  ~Handle() {
    if (p) Free(p);
  }
};
using Instance = Handle<plsv_instance, plsv_instance_free>;
using Schedule = Handle<plsv_schedule, plsv_schedule_free>;
using Params = Handle<plsv_params, plsv_params_free>;

std::string take(char* s) {
  std::string out = s ? s : "";
  plsv_string_free(s);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(PLSV_E_IO, "cannot write " + path);
}

Instance load_instance(const std::string& path) {
  Instance i;
  check(plsv_instance_read(path.c_str(), &i.p));
  return i;
}

Schedule load_schedule(const Instance& inst, const std::string& path) {
  Schedule s;
  check(plsv_schedule_read(inst.p, path.c_str(), &s.p));
  return s;
}

struct Global {
  std::uint64_t seed = 1;
  double time_limit = -1;
  std::string params_file;

  Params params() const {
    Params p;
    p.p = plsv_params_new();
    if (!p.p) fail(PLSV_E_INTERNAL, "out of memory");
    if (!params_file.empty()) {
      std::ifstream in(params_file);
      if (!in) fail(PLSV_E_IO, "cannot open " + params_file);
      std::stringstream ss;
      ss << in.rdbuf();
      check(plsv_params_load_text(p.p, ss.str().c_str()));
    }
    if (time_limit > 0) check(plsv_params_set(p.p, "sub_time_limit", std::to_string(time_limit).c_str()));
    return p;
  }
};

const std::vector<double> kAlpha{0.25, 0.5, 0.75}, kBeta{0.7, 0.9}, kGamma{0.05, 0.15};

// |O| x |M| x replicates over the 12 factor combinations
struct Grid {
  int ops = 15, machines = 4, replicates = 1;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (!(in >> g.ops >> x1 >> g.machines) || x1 != 'x') fail(PLSV_E_INVALID_ARGUMENT, "grid must look like 15x4 or 15x4x3");
  if (in >> x2 >> g.replicates) {
    if (x2 != 'x') fail(PLSV_E_INVALID_ARGUMENT, "grid must look like 15x4 or 15x4x3");
  } else {
    g.replicates = 1;
  }
  return g;
}

template <class F>
void for_grid(const Grid& g, std::uint64_t seed, F&& f) {
  std::uint64_t n = 0;
  for (double a : kAlpha)
    for (double b : kBeta)
      for (double c : kGamma)
        for (int r = 1; r <= g.replicates; ++r) {
          Instance inst;
          check(plsv_instance_generate(g.ops, g.machines, a, b, c, seed + n++, &inst.p));
          char* name = nullptr;
          check(plsv_instance_name(g.ops, g.machines, a, b, c, r, &name));
          f(take(name), std::move(inst));
        }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel machine batch scheduling with family setups (TWCT)"};
  app.require_subcommand(1);
  app.fallthrough();
  Global global;
  app.add_option("--seed", global.seed, "random seed")->capture_default_str();
  app.add_option("--time-limit", global.time_limit, "seconds per sub-solve (overrides the params file)");
  app.add_option("--params-file", global.params_file, "key=value parameter file");

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  int g_ops = 15, g_machines = 4, g_reps = 1;
  double g_alpha = 0.5, g_beta = 0.9, g_gamma = 0.15;
  std::string g_out, g_grid;
  gen->add_option("--ops", g_ops)->capture_default_str();
  gen->add_option("--machines", g_machines)->capture_default_str();
  gen->add_option("--release-factor", g_alpha)->capture_default_str();
  gen->add_option("--eligibility-factor", g_beta)->capture_default_str();
  gen->add_option("--job-factor", g_gamma)->capture_default_str();
  gen->add_option("--grid", g_grid, "OPSxMACHINES[xREPLICATES]: every factor combination, files named by the scheme");
  gen->add_option("--replicate", g_reps, "replicate index used in the printed name")->capture_default_str();
  gen->add_option("-o,--out", g_out, "output file (single) or directory (grid); stdout when omitted");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string s_inst, s_method = "ils3", s_out, s_log;
  solve->add_option("instance", s_inst)->required();
  solve->add_option("-m,--method", s_method, "wmct, ils1..ils3 or grasp1..grasp3")->capture_default_str();
  solve->add_option("-o,--out", s_out, "schedule JSON output; stdout when omitted");
  solve->add_option("--log", s_log, "run events CSV");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a schedule");
  std::string e_inst, e_sched;
  eval->add_option("instance", e_inst)->required();
  eval->add_option("schedule", e_sched)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run methods over instances and write CSV reports");
  std::vector<std::string> b_inputs;
  std::string b_methods = "ils3,grasp3", b_bks, b_out = "bench_out", b_grid;
  int b_runs = 10, b_workers = 1;
  bool b_det = false;
  bench->add_option("instances", b_inputs, "instance files or directories of *.json");
  bench->add_option("--grid", b_grid, "generate OPSxMACHINES[xREPLICATES] instances instead of reading files");
  bench->add_option("--methods", b_methods, "comma separated")->capture_default_str();
  bench->add_option("--runs", b_runs)->capture_default_str();
  bench->add_option("--bks", b_bks, "CSV name,twct");
  bench->add_option("-o,--out", b_out, "report directory")->capture_default_str();
  bench->add_option("-j,--workers", b_workers)->capture_default_str();
  bench->add_flag("--deterministic", b_det, "bound sub-solves by nodes; reports carry nodes instead of seconds");

  // gantt
  auto* gantt = app.add_subcommand("gantt", "draw a schedule");
  std::string c_inst, c_sched, c_format = "svg", c_out;
  gantt->add_option("instance", c_inst)->required();
  gantt->add_option("schedule", c_sched)->required();
  gantt->add_option("-f,--format", c_format)->check(CLI::IsMember({"svg", "text"}))->capture_default_str();
  gantt->add_option("-o,--out", c_out);

  // export-lp
  auto* lp = app.add_subcommand("export-lp", "write the batch model in CPLEX LP format");
  std::string l_inst, l_form = "s", l_order, l_out;
  lp->add_option("instance", l_inst)->required();
  lp->add_option("--formulation", l_form)->check(CLI::IsMember({"wspt", "s"}))->capture_default_str();
  lp->add_option("--order", l_order, "schedule whose in-batch order seeds the WSPT precedence");
  lp->add_option("-o,--out", l_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    std::cerr << "error invalid_argument: " << e.what() << "\n";
    return 1 + PLSV_E_INVALID_ARGUMENT;
  }

  try {
    if (*gen) {
      if (!g_grid.empty()) {
        if (g_out.empty()) fail(PLSV_E_INVALID_ARGUMENT, "gen --grid needs --out DIR");
        fs::create_directories(g_out);
        for_grid(parse_grid(g_grid), global.seed, [&](const std::string& name, Instance inst) {
          const auto path = (fs::path(g_out) / (name + ".json")).string();
          check(plsv_instance_write(inst.p, path.c_str()));
          std::cout << path << "\n";
        });
      } else {
        Instance inst;
        check(plsv_instance_generate(g_ops, g_machines, g_alpha, g_beta, g_gamma, global.seed, &inst.p));
        char* text = nullptr;
        check(plsv_instance_to_json(inst.p, &text));
        emit(take(text), g_out);
        char* name = nullptr;
        if (plsv_instance_name(g_ops, g_machines, g_alpha, g_beta, g_gamma, g_reps, &name) == PLSV_OK)
          std::cerr << "name " << take(name) << "\n";
      }
    } else if (*solve) {
      const Instance inst = load_instance(s_inst);
      const Params params = global.params();
      Schedule sched;
      std::int64_t twct = 0;
      char* log = nullptr;
      check(plsv_solve(inst.p, s_method.c_str(), params.p, global.seed, &sched.p, &twct, s_log.empty() ? nullptr : &log));
      if (!s_log.empty()) emit(take(log), s_log);
      char* text = nullptr;
      check(plsv_schedule_to_json(sched.p, &text));
      emit(take(text), s_out);
      std::cerr << "twct " << twct << "\n";
    } else if (*eval) {
      const Instance inst = load_instance(e_inst);
      const Schedule sched = load_schedule(inst, e_sched);
      char* report = nullptr;
      check(plsv_evaluate_report(inst.p, sched.p, &report));
      std::cout << take(report);
    } else if (*bench) {
      std::vector<Instance> insts;
      std::vector<std::string> names;
      if (!b_grid.empty()) {
        for_grid(parse_grid(b_grid), global.seed, [&](const std::string& name, Instance inst) {
          names.push_back(name);
          insts.push_back(std::move(inst));
        });
      }
      std::vector<fs::path> files;
      for (const auto& in : b_inputs) {
        if (fs::is_directory(in)) {
          std::vector<fs::path> found;
          for (const auto& e : fs::directory_iterator(in))
            if (e.path().extension() == ".json") found.push_back(e.path());
          std::sort(found.begin(), found.end());
          files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(in)) {
          files.push_back(in);
        } else {
          fail(PLSV_E_IO, "unknown instance reference " + in);
        }
      }
      for (const auto& f : files) {
        insts.push_back(load_instance(f.string()));
        names.push_back(f.stem().string());
      }
      if (insts.empty()) fail(PLSV_E_INVALID_ARGUMENT, "bench: no instances (give files, directories or --grid)");
      std::vector<const plsv_instance*> ptrs;
      std::vector<const char*> cnames;
      for (size_t i = 0; i < insts.size(); ++i) {
        ptrs.push_back(insts[i].p);
        cnames.push_back(names[i].c_str());
      }
      const Params params = global.params();
      check(plsv_bench(ptrs.data(), cnames.data(), ptrs.size(), b_methods.c_str(), b_runs, global.seed, params.p,
                       b_bks.empty() ? nullptr : b_bks.c_str(), b_out.c_str(), b_workers, b_det ? 1 : 0));
      std::cout << (fs::path(b_out) / "runs.csv").string() << "\n"
                << (fs::path(b_out) / "aggregate.csv").string() << "\n"
                << (fs::path(b_out) / "evolution.csv").string() << "\n";
    } else if (*gantt) {
      const Instance inst = load_instance(c_inst);
      const Schedule sched = load_schedule(inst, c_sched);
      char* out = nullptr;
      check(plsv_gantt(inst.p, sched.p, c_format.c_str(), &out));
      emit(take(out), c_out);
    } else if (*lp) {
      const Instance inst = load_instance(l_inst);
      Schedule order;
      if (!l_order.empty()) order = load_schedule(inst, l_order);
      check(plsv_export_lp(inst.p, l_form.c_str(), order.p, l_out.c_str()));
    }
  } catch (const Failure& f) {
    std::cerr << "error " << plsv_status_name(f.status) << ": " << f.message << "\n";
    return 1 + static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error internal: " << e.what() << "\n";
    return 1 + PLSV_E_INTERNAL;
  }
  return 0;
}
