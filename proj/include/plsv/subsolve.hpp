#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "plsv/model.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

enum class SolveStatus { Optimal, FeasibleTimeLimit, InfeasibleProven, Unknown };

const char* to_string(SolveStatus s);

struct SolveRequest {
  BatchModel model;
  std::optional<Schedule> warm_start;
  double time_limit = 1.0;      // seconds of wall clock; <= 0 means unlimited
  std::int64_t node_limit = 0;  // 0 means unlimited; with a node limit the result is deterministic
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Schedule> incumbent;
  Time objective = 0;  // model objective of the incumbent
  Time bound = 0;
  std::int64_t nodes = 0;
  double seconds = 0.0;
};

// Depth-first branch and bound over the X decisions (and the inner positions for
// Batch-S). The warm start seeds the upper bound; the result never exceeds it.
SolveResult solve(const SolveRequest& req);

// CPLEX LP text. Variable names: X_i_k_b, Y_f_k_b, Z_i_j, S_k_b, P_k_b, C_i, CJ_j (1-based).
void export_lp(const BatchModel& model, std::ostream& out);
void export_model(const BatchModel& model, const std::string& path);

struct VarName {
  char kind = 0;  // 'X', 'Y', 'Z', 'S', 'P', 'C' (operation) or 'J' (job)
  int a = -1, b = -1, c = -1;  // 0-based indices, unused ones stay -1
};

std::optional<VarName> parse_var_name(const std::string& name);
std::string format_var_name(const VarName& v);

// Runs `command <lp-file> <solution-file> <time-limit>` and reads back "name value"
// lines plus an optional "status <Optimal|Feasible|Infeasible>" line. The decoded
// schedule replaces the warm start only when it is feasible and not worse.
SolveResult solve_external(const SolveRequest& req, const std::string& command);

}  // namespace plsv
