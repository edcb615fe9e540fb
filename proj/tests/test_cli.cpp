#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"
#include "plsv/bench.hpp"
#include "plsv/gantt.hpp"

using namespace plsv;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

BenchConfig tiny_bench() {
  BenchConfig cfg;
  cfg.instances = {{"o5_m2_x_1", fixtures::random_instance(1, 5, 2)}, {"o6_m3_x_1", fixtures::random_instance(2, 6, 3)}};
  cfg.methods = {parse_method("ils1"), parse_method("grasp3")};
  cfg.runs = 10;
  cfg.params.omega_max = 2;
  cfg.deterministic = true;
  cfg.params.sub_node_limit = 500;
  return cfg;
}

}  // namespace

TEST(Rpd, Examples) {
  EXPECT_EQ(format_rpd(rpd(7634, 7634)), "0.00");
  EXPECT_EQ(format_rpd(rpd(90, 100)), "-10.00");
  EXPECT_EQ(format_rpd(rpd(11096, 10000)), "10.96");
  EXPECT_EQ(format_rpd(-0.001), "0.00");
  EXPECT_THROW(rpd(5, 0), Error);
  EXPECT_THROW(rpd(5, -3), Error);
}

TEST(ParamsText, KeysCommentsAndErrors) {
  const Params p = parse_params("# tuned\nrho = 0.3\nomega_max=4  # fewer\n\nsub_node_limit=100\n");
  EXPECT_DOUBLE_EQ(p.rho, 0.3);
  EXPECT_EQ(p.omega_max, 4);
  EXPECT_EQ(p.sub_node_limit, 100);
  EXPECT_DOUBLE_EQ(p.phi, 0.30);
  try {
    parse_params("rho=0.2\nbogus=1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_params("rho\n"), Error);
  EXPECT_THROW(parse_params("rho=abc\n"), Error);
  EXPECT_THROW(parse_params("rho=2\n"), Error);
  EXPECT_THROW(parse_params("solver=external\n"), Error);
  const Params ext = parse_params("solver=external\nsolver_command=python3 bridge.py\n");
  EXPECT_TRUE(ext.external_solver);
  EXPECT_EQ(ext.solver_command, "python3 bridge.py");
  EXPECT_FALSE(parse_params("solver=builtin\n").external_solver);
}

TEST(Methods, Names) {
  EXPECT_EQ(parse_method("grasp2").name(), "grasp2");
  EXPECT_EQ(parse_method("ils3").method, Method::Ils);
  EXPECT_THROW(parse_method("ils4"), Error);
  EXPECT_THROW(parse_method("sa1"), Error);
}

TEST(Bench, Counts) {
  const BenchReport r = run_bench(tiny_bench());
  EXPECT_EQ(r.runs.size(), 40u);
  EXPECT_EQ(r.aggregate.size(), 4u);
  EXPECT_EQ(lines(runs_csv(r)).size(), 41u);
  EXPECT_EQ(lines(aggregate_csv(r)).size(), 5u);
  EXPECT_EQ(lines(runs_csv(r))[0], "instance,method,seed,twct,nodes,rpd,reference");
  EXPECT_EQ(lines(aggregate_csv(r))[0], "ops,machines,method,runs,mean_rpd,mean_nodes");
  for (size_t i = 1; i < r.runs.size(); ++i) {
    const auto& a = r.runs[i - 1];
    const auto& b = r.runs[i];
    EXPECT_TRUE(std::tie(a.instance, a.method, a.seed) < std::tie(b.instance, b.method, b.seed));
  }
  for (const auto& row : r.runs) {
    EXPECT_EQ(row.reference, "batch_best");
    EXPECT_GE(row.rpd, 0.0);
    ASSERT_FALSE(row.evolution.empty());
    EXPECT_EQ(row.evolution.back().second, row.twct);
  }
}

TEST(Bench, AggregateRecomputesFromRows) {
  const BenchReport r = run_bench(tiny_bench());
  const auto again = aggregate_runs(r.runs);
  ASSERT_EQ(again.size(), r.aggregate.size());
  for (size_t i = 0; i < again.size(); ++i) {
    double sum = 0;
    int n = 0;
    for (const auto& row : r.runs)
      if (row.ops == again[i].ops && row.machines == again[i].machines && row.method == again[i].method) {
        sum += row.rpd;
        ++n;
      }
    EXPECT_EQ(n, again[i].runs);
    EXPECT_DOUBLE_EQ(sum / n, r.aggregate[i].mean_rpd);
  }
}

TEST(Bench, DeterministicReportsAreByteIdentical) {
  BenchConfig cfg = tiny_bench();
  cfg.workers = 3;
  const BenchReport a = run_bench(cfg);
  cfg.workers = 1;
  const BenchReport b = run_bench(cfg);
  EXPECT_EQ(runs_csv(a), runs_csv(b));
  EXPECT_EQ(aggregate_csv(a), aggregate_csv(b));
  EXPECT_EQ(evolution_csv(a), evolution_csv(b));
}

TEST(Bench, AllAtBksGivesZero) {
  Instance one;
  one.ops = {{7, 2, 10, 0, {0}}};
  one.jobs = {{3, {0}}};
  one.machines = {{0, 100}};
  one.families = {{5}};
  require_valid(one);
  BenchConfig cfg;
  cfg.instances = {{"single", std::make_shared<const Instance>(one)}};
  cfg.methods = {parse_method("ils2"), parse_method("grasp1")};
  cfg.runs = 3;
  cfg.params.sub_node_limit = 100;
  cfg.bks = {{"single", 3 * 14}};
  const BenchReport r = run_bench(cfg);
  for (const auto& row : r.runs) EXPECT_EQ(row.reference, "bks");
  for (const auto& g : r.aggregate) EXPECT_EQ(format_rpd(g.mean_rpd), "0.00");
}

TEST(Bench, RejectsEmptyConfig) {
  BenchConfig cfg = tiny_bench();
  cfg.methods.clear();
  EXPECT_THROW(run_bench(cfg), Error);
  cfg = tiny_bench();
  cfg.runs = 0;
  EXPECT_THROW(run_bench(cfg), Error);
}

TEST(Gantt, FigureOneRows) {
  const Instance inst = fixtures::appendix_b();
  const auto g = gantt_layout(inst, fixtures::figure1(inst));
  ASSERT_EQ(g.rows.size(), 4u);
  // machine 4: (f1: 14) (f2: 6) (f3: 15, 7)
  std::vector<std::pair<int, int>> row4;
  for (const auto& s : g.rows[3]) row4.push_back({s.family + 1, s.op + 1});
  const std::vector<std::pair<int, int>> expect{{1, 0}, {1, 14}, {2, 0}, {2, 6}, {3, 0}, {3, 15}, {3, 7}};
  EXPECT_EQ(row4, expect);
  EXPECT_EQ(g.rows[3].back().end, 90);
  EXPECT_EQ(g.job_completion, (std::vector<Time>{35, 60, 68, 54, 90}));
}

TEST(Gantt, SingleOperation) {
  Instance one;
  one.ops = {{7, 2, 10, 0, {0}}};
  one.jobs = {{3, {0}}};
  one.machines = {{0, 100}};
  one.families = {{5}};
  require_valid(one);
  Schedule s(1);
  s.machines[0] = {Batch{0, {0}}};
  const auto g = gantt_layout(one, s);
  ASSERT_EQ(g.rows.size(), 1u);
  ASSERT_EQ(g.rows[0].size(), 2u);
  EXPECT_EQ(g.rows[0][0].op, -1);
  EXPECT_EQ(g.rows[0][0].start, 2);
  EXPECT_EQ(g.rows[0][1].end, 14);
}

TEST(Gantt, TextAndSvgShareBoundaries) {
  const Instance inst = fixtures::appendix_b();
  const auto g = gantt_layout(inst, fixtures::figure1(inst));
  const std::string svg = render_svg(g), text = render_text(g);
  std::vector<std::tuple<int, long, long>> from_svg, from_text;
  const std::regex rect("data-machine=\"(\\d+)\" data-start=\"(\\d+)\" data-end=\"(\\d+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it)
    from_svg.push_back({std::stoi((*it)[1]), std::stol((*it)[2]), std::stol((*it)[3])});
  const std::regex row("^\\s+(\\d+)\\s+\\d+\\s+(?:setup f\\d+|op \\d+)\\s+(\\d+)\\s+(\\d+)$");
  for (const auto& l : lines(text)) {
    std::smatch m;
    if (std::regex_match(l, m, row)) from_text.push_back({std::stoi(m[1]), std::stol(m[2]), std::stol(m[3])});
  }
  EXPECT_EQ(from_svg.size(), 28u);
  EXPECT_EQ(from_svg, from_text);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
}

TEST(Gantt, RejectsInfeasible) {
  const Instance inst = fixtures::appendix_b();
  Schedule s = fixtures::figure1(inst);
  s.machines[1][0].ops = {8};  // op 8 missing
  try {
    gantt_layout(inst, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("8"), std::string::npos);
  }
}
