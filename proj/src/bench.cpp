#include "plsv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "plsv/instgen.hpp"

namespace plsv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidArgument, "parameter " + key + ": expected a number, got '" + v + "'");
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidArgument, "parameter " + key + ": expected an integer, got '" + v + "'");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

}  // namespace

double rpd(Time method, Time bks) {
  if (bks <= 0) throw Error(ErrorKind::InvalidArgument, "rpd: reference value must be positive, got " + std::to_string(bks));
  return 100.0 * static_cast<double>(method - bks) / static_cast<double>(bks);
}

std::string format_rpd(double value) { return fixed(value, 2); }

void apply_param(Params& p, const std::string& key, const std::string& value) {
  if (key == "rho") p.rho = to_double(key, value);
  else if (key == "phi") p.phi = to_double(key, value);
  else if (key == "omega") p.omega = to_double(key, value);
  else if (key == "delta") p.delta = to_double(key, value);
  else if (key == "rcl_alpha") p.rcl_alpha = to_double(key, value);
  else if (key == "omega_max") p.omega_max = static_cast<int>(to_int(key, value));
  else if (key == "sub_time_limit") p.sub_time_limit = to_double(key, value);
  else if (key == "sub_node_limit") p.sub_node_limit = to_int(key, value);
  else if (key == "swap_retries") p.swap_retries = static_cast<int>(to_int(key, value));
  else if (key == "solver") {
    if (value == "builtin") p.external_solver = false;
    else if (value == "external") p.external_solver = true;
    else {
      throw Error(ErrorKind::InvalidArgument, "parameter solver: expected builtin or external, got '" + value + "'");
    }
  } else if (key == "solver_command") {
    p.solver_command = value;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + key + "'");
  }
}

Params parse_params(const std::string& text, Params base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Parse, "params line " + std::to_string(lineno) + ": expected key=value");
    try {
      apply_param(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), "params line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

std::string MethodSpec::name() const { return std::string(to_string(method)) + std::to_string(variant); }

MethodSpec parse_method(const std::string& name) {
  MethodSpec m;
  std::string base = name;
  if (!base.empty() && base.back() >= '1' && base.back() <= '3') {
    m.variant = base.back() - '0';
    base.pop_back();
  } else {
    throw Error(ErrorKind::InvalidArgument, "method '" + name + "': expected ils1..ils3 or grasp1..grasp3");
  }
  if (base == "ils") m.method = Method::Ils;
  else if (base == "grasp") m.method = Method::Grasp;
  else throw Error(ErrorKind::InvalidArgument, "method '" + name + "': expected ils1..ils3 or grasp1..grasp3");
  return m;
}

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs) {
  std::map<std::tuple<int, int, std::string>, AggregateRow> groups;
  for (const auto& r : runs) {
    auto& g = groups[{r.ops, r.machines, r.method}];
    g.ops = r.ops;
    g.machines = r.machines;
    g.method = r.method;
    ++g.runs;
    g.mean_rpd += r.rpd;
    g.mean_time += r.time;
  }
  std::vector<AggregateRow> out;
  for (auto& [key, g] : groups) {
    g.mean_rpd /= g.runs;
    g.mean_time /= g.runs;
    out.push_back(g);
  }
  return out;
}

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.runs < 1) throw Error(ErrorKind::InvalidArgument, "bench: runs must be at least 1");
  if (cfg.methods.empty()) throw Error(ErrorKind::InvalidArgument, "bench: no methods");
  if (cfg.instances.empty()) throw Error(ErrorKind::InvalidArgument, "bench: no instances");
  Params params = cfg.params;
  if (cfg.deterministic) {
    if (params.sub_node_limit == 0) params.sub_node_limit = 20000;
    params.sub_time_limit = 0;
  }
  params.validate();

  struct Task {
    size_t instance;
    MethodSpec method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (size_t i = 0; i < cfg.instances.size(); ++i)
    for (const auto& m : cfg.methods)
      for (int r = 0; r < cfg.runs; ++r) tasks.push_back({i, m, cfg.seed + static_cast<std::uint64_t>(r)});

  std::vector<RunRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const size_t t = next++;
      if (t >= tasks.size()) return;
      try {
        const auto& task = tasks[t];
        const auto& bi = cfg.instances[task.instance];
        const RunResult res = run_variant(bi.instance, task.method.method, task.method.variant, params, task.seed);
        if (!check_feasibility(*bi.instance, res.schedule).empty())
          throw Error(ErrorKind::Internal, "bench: infeasible result on " + bi.name);
        RunRow& row = rows[t];
        row.instance = bi.name;
        row.method = task.method.name();
        row.seed = task.seed;
        row.ops = bi.instance->num_ops();
        row.machines = bi.instance->num_machines();
        row.twct = res.twct;
        row.time = cfg.deterministic ? static_cast<double>(res.nodes) : res.seconds;
        Time best = -1;
        for (const auto& e : res.log.events)
          if (best < 0 || e.best < best) {
            best = e.best;
            row.evolution.push_back({cfg.deterministic ? static_cast<double>(e.work) : e.seconds, best});
          }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, Time> batch_best;
  for (const auto& r : rows) {
    auto it = batch_best.find(r.instance);
    if (it == batch_best.end() || r.twct < it->second) batch_best[r.instance] = r.twct;
  }
  for (auto& r : rows) {
    const auto it = cfg.bks.find(r.instance);
    if (it != cfg.bks.end()) {
      r.rpd = rpd(r.twct, it->second);
      r.reference = "bks";
    } else {
      r.rpd = rpd(r.twct, batch_best[r.instance]);
      r.reference = "batch_best";
    }
  }
  std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tie(a.instance, a.method, a.seed) < std::tie(b.instance, b.method, b.seed);
  });

  BenchReport rep;
  rep.deterministic = cfg.deterministic;
  rep.runs = std::move(rows);
  rep.aggregate = aggregate_runs(rep.runs);
  return rep;
}

std::string runs_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "instance,method,seed,twct," << (r.deterministic ? "nodes" : "time") << ",rpd,reference\n";
  for (const auto& row : r.runs)
    os << row.instance << ',' << row.method << ',' << row.seed << ',' << row.twct << ','
       << fixed(row.time, r.deterministic ? 0 : 3) << ',' << format_rpd(row.rpd) << ',' << row.reference << '\n';
  return os.str();
}

std::string aggregate_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "ops,machines,method,runs,mean_rpd," << (r.deterministic ? "mean_nodes" : "mean_time") << '\n';
  for (const auto& g : r.aggregate)
    os << g.ops << ',' << g.machines << ',' << g.method << ',' << g.runs << ',' << format_rpd(g.mean_rpd) << ','
       << fixed(g.mean_time, r.deterministic ? 1 : 3) << '\n';
  return os.str();
}

std::string evolution_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "instance,method,seed," << (r.deterministic ? "nodes" : "time") << ",best\n";
  for (const auto& row : r.runs)
    for (const auto& [t, best] : row.evolution)
      os << row.instance << ',' << row.method << ',' << row.seed << ',' << fixed(t, r.deterministic ? 0 : 3) << ','
         << best << '\n';
  return os.str();
}

void write_bench_report(const BenchReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_text_file((base / "runs.csv").string(), runs_csv(r));
  write_text_file((base / "aggregate.csv").string(), aggregate_csv(r));
  write_text_file((base / "evolution.csv").string(), evolution_csv(r));
}

}  // namespace plsv
