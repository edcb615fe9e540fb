#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plsv/instance.hpp"
#include "plsv/search.hpp"

namespace plsv {

// Relative percentage deviation 100 (method - bks) / bks. Throws on bks <= 0.
double rpd(Time method, Time bks);
// Two decimals, "-0.00" normalized to "0.00".
std::string format_rpd(double value);

// key=value parameter text: blank lines and '#' comments are skipped. Keys:
// rho, phi, omega, delta, rcl_alpha, omega_max, sub_time_limit, sub_node_limit,
// swap_retries, solver (builtin | external), solver_command.
void apply_param(Params& params, const std::string& key, const std::string& value);
Params parse_params(const std::string& text, Params base = {});

// "ils1".."ils3", "grasp1".."grasp3"
struct MethodSpec {
  Method method = Method::Ils;
  int variant = 3;

  std::string name() const;
};

MethodSpec parse_method(const std::string& name);

struct BenchInstance {
  std::string name;
  std::shared_ptr<const Instance> instance;
};

struct BenchConfig {
  std::vector<BenchInstance> instances;
  std::vector<MethodSpec> methods;
  int runs = 10;
  std::uint64_t seed = 1;  // run r uses seed + r
  Params params;
  std::map<std::string, Time> bks;  // empty: best twct of the batch is the reference
  int workers = 1;
  // Sub-solves bounded by nodes only; time columns report nodes instead of seconds.
  bool deterministic = false;
};

struct RunRow {
  std::string instance;
  std::string method;
  std::uint64_t seed = 0;
  int ops = 0, machines = 0;
  Time twct = 0;
  double time = 0.0;  // seconds, or nodes in deterministic mode
  double rpd = 0.0;
  std::string reference;  // "bks" or "batch_best"
  std::vector<std::pair<double, Time>> evolution;  // (time, best twct) at each improvement
};

struct AggregateRow {
  int ops = 0, machines = 0;
  std::string method;
  int runs = 0;
  double mean_rpd = 0.0;
  double mean_time = 0.0;
};

struct BenchReport {
  bool deterministic = false;
  std::vector<RunRow> runs;  // sorted by (instance, method, seed)
  std::vector<AggregateRow> aggregate;
};

BenchReport run_bench(const BenchConfig& cfg);
// Groups by (|O|, |M|, method) using only the run rows.
std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs);

std::string runs_csv(const BenchReport& r);
std::string aggregate_csv(const BenchReport& r);
std::string evolution_csv(const BenchReport& r);
// Writes runs.csv, aggregate.csv and evolution.csv into dir (created if missing).
void write_bench_report(const BenchReport& r, const std::string& dir);

}  // namespace plsv
