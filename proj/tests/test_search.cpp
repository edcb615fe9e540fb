#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "plsv/construct.hpp"
#include "plsv/oracle.hpp"
#include "plsv/search.hpp"

using namespace plsv;

namespace {

std::shared_ptr<const Instance> appendix() { return std::make_shared<const Instance>(fixtures::appendix_b()); }

Params quick() {
  Params p;
  p.sub_node_limit = 2000;
  p.omega_max = 3;
  return p;
}

bool covers_all_ops(const Instance& inst, const Schedule& s) { return check_feasibility(inst, s).empty(); }

std::set<Slot> available(const std::vector<int>& mb) {
  std::set<Slot> out;
  for (int k = 0; k < static_cast<int>(mb.size()); ++k)
    for (int b = 0; b < mb[k]; ++b) out.insert({k, b});
  return out;
}

}  // namespace

TEST(AvailableBatches, FigureOneState) {
  const auto inst = appendix();
  const Schedule s = fixtures::figure1(*inst);
  SearchState state(inst, Params{}, 1);
  init_mb(state, s);
  EXPECT_EQ(state.mb, (std::vector<int>{4, 4, 5, 4}));
  int total = 0;
  for (int v : state.mb) total += v;
  EXPECT_EQ(total, 17);
}

TEST(AvailableBatches, ClampAndEmptyMachine) {
  Instance one;
  one.ops = {{5, 0, 10, 0, {0, 1}}, {5, 0, 10, 1, {0}}};
  one.jobs = {{1, {0, 1}}};
  one.machines = {{0, 100}, {0, 100}};
  one.families = {{1}, {1}};
  require_valid(one);
  const auto inst = std::make_shared<const Instance>(one);
  Schedule s(2);
  s.machines[0] = {Batch{0, {0}}, Batch{1, {1}}};
  SearchState state(inst, Params{}, 1);
  init_mb(state, s);
  EXPECT_EQ(state.mb, (std::vector<int>{2, 1}));  // |B_1| = 2, machine 2 empty
}

TEST(AvailableBatches, UpdateOnlyWhenFull) {
  const auto inst = appendix();
  const Schedule s = fixtures::figure1(*inst);
  SearchState state(inst, Params{}, 1);
  state.mb = {3, 6, 4, 4};
  update_mb(state, s);
  EXPECT_EQ(state.mb, (std::vector<int>{4, 6, 5, 4}));
}

TEST(Windows, NinetyByThirty) {
  const auto r = window_ranges(90, 30);
  const std::vector<std::pair<double, double>> expect{{60, 90}, {45, 75}, {30, 60}, {15, 45}, {0, 30}};
  EXPECT_EQ(r, expect);
}

TEST(Windows, IterationCount) {
  for (Time cmax : {7, 50, 90, 133, 400})
    for (Time rs : {2, 4, 18, 30})
      if (rs < cmax) {
        const auto r = window_ranges(cmax, rs);
        const auto expect = static_cast<size_t>((2 * cmax + rs - 1) / rs - 1);
        EXPECT_EQ(r.size(), expect) << cmax << " " << rs;
        EXPECT_EQ(r.front().second, cmax);
        EXPECT_EQ(r.back().first, 0);
      }
  EXPECT_EQ(window_ranges(90, 90).size(), 1u);
  EXPECT_EQ(window_ranges(90, 200).size(), 1u);
}

TEST(Windows, RangeSize) {
  EXPECT_EQ(window_size(0.20, 90), 18);
  EXPECT_EQ(window_size(1.0 / 3.0, 90), 30);
  EXPECT_EQ(window_size(0.0, 90), 1);
}

TEST(Windows, PassFreesEveryAvailableBatch) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = seed == 1 ? appendix() : fixtures::random_instance(seed, 25, 4);
    const Schedule s = seed == 1 ? fixtures::figure1(*inst) : wmct_wavga(*inst);
    SearchState state(inst, Params{}, 1);
    init_mb(state, s);
    const Time cmax = evaluate(*inst, s).cmax;
    std::set<Slot> seen;
    for (const auto& [a, b] : window_ranges(cmax, window_size(0.2, cmax))) {
      const auto w = window_slots(*inst, s, state.mb, a, b);
      seen.insert(w.begin(), w.end());
    }
    EXPECT_EQ(seen, available(state.mb)) << "seed " << seed;
  }
}

TEST(Relocate, SeventeenBatches) {
  EXPECT_EQ(ceil_fraction(0.30, 17), 6);
  EXPECT_EQ(relocate_sizes(17, 0.30), (std::vector<int>{6, 6, 5}));
  EXPECT_EQ(relocate_sizes(17, 1.0), std::vector<int>{17});
  EXPECT_EQ(relocate_sizes(5, 0.0), std::vector<int>(5, 1));
}

TEST(Swap, NumberOfSwaps) { EXPECT_EQ(ceil_fraction(0.10, 17), 2); }

TEST(Swap, GridRoundTripAndInvolution) {
  const auto inst = appendix();
  const Schedule s = fixtures::figure1(*inst);
  const std::vector<int> mb{4, 4, 5, 4};
  BatchGrid g = to_grid(s, mb);
  ASSERT_EQ(g[0].size(), 4u);
  EXPECT_TRUE(g[0][3].ops.empty());
  EXPECT_EQ(from_grid(g), s);
  const BatchGrid orig = g;
  swap_slots(g, {0, 1}, {2, 0});
  EXPECT_NE(g, orig);
  swap_slots(g, {2, 0}, {0, 1});
  EXPECT_EQ(g, orig);
}

TEST(Swap, WithEmptySlotRelocates) {
  const auto inst = appendix();
  const Schedule s = fixtures::figure1(*inst);
  BatchGrid g = to_grid(s, {4, 4, 5, 4});
  // [10] from machine 1 into machine 3's spare slot
  ASSERT_TRUE(swap_feasible(*inst, g, {0, 1}, {2, 4}));
  swap_slots(g, {0, 1}, {2, 4});
  const Schedule t = from_grid(g);
  EXPECT_EQ(t.machines[0].size(), 2u);
  EXPECT_EQ(t.machines[2].back().ops, std::vector<int>{9});
  EXPECT_TRUE(covers_all_ops(*inst, t));
  // [8,9] may not leave machine 2 (op 8 runs there only)
  EXPECT_FALSE(swap_feasible(*inst, g, {1, 0}, {3, 0}));
}

TEST(Swap, PerturbationStaysFeasible) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::random_instance(seed, 25, 4);
    const Schedule s = wmct_wavga(*inst);
    SearchState state(inst, Params{}, seed);
    init_mb(state, s);
    const Schedule t = random_batch_swap(state, s);
    EXPECT_TRUE(covers_all_ops(*inst, t));
  }
}

TEST(Swap, NothingToSwap) {
  Instance one;
  one.ops = {{5, 0, 10, 0, {0}}};
  one.jobs = {{1, {0}}};
  one.machines = {{0, 100}};
  one.families = {{1}};
  require_valid(one);
  const auto inst = std::make_shared<const Instance>(one);
  Schedule s(1);
  s.machines[0] = {Batch{0, {0}}};
  SearchState state(inst, Params{}, 1);
  init_mb(state, s);
  EXPECT_EQ(random_batch_swap(state, s), s);
}

TEST(Neighborhoods, NeverWorsen) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = fixtures::random_instance(seed, 15, 3);
    SearchState state(inst, quick(), seed);
    Rng rng(seed);
    const Schedule s = randomized_construct(*inst, 0.5, rng);
    const Time f = evaluate(*inst, s).twct;
    for (Formulation kind : {Formulation::Wspt, Formulation::Sequencing}) {
      init_mb(state, s);
      const Schedule w = batch_windows(state, s, kind);
      init_mb(state, s);
      const Schedule r = multi_batches_relocate(state, s, kind);
      init_mb(state, s);
      const Schedule v = vnd(state, s, kind);
      for (const Schedule* out : {&w, &r, &v}) {
        EXPECT_TRUE(covers_all_ops(*inst, *out));
        EXPECT_LE(evaluate(*inst, *out).twct, f);
      }
    }
  }
}

TEST(Neighborhoods, VndAtFixedPointReturnsInput) {
  const auto inst = fixtures::random_instance(4, 12, 3);
  SearchState state(inst, quick(), 4);
  const Schedule s0 = wmct_wavga(*inst);
  init_mb(state, s0);
  const Schedule s1 = vnd(state, s0, Formulation::Sequencing);
  init_mb(state, s1);
  const Schedule s2 = vnd(state, s1, Formulation::Sequencing);
  EXPECT_EQ(evaluate(*inst, s2).twct, evaluate(*inst, s1).twct);
}

TEST(Neighborhoods, VndNeverBelowOptimum) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto inst = fixtures::random_instance(seed, 5, 2);
    const Time opt = brute_force_optimum(*inst).twct;
    SearchState state(inst, quick(), seed);
    const Schedule s = wmct_wavga(*inst);
    init_mb(state, s);
    const Time got = evaluate(*inst, vnd(state, s, Formulation::Sequencing)).twct;
    EXPECT_GE(got, opt);
    hits += got == opt;
  }
  EXPECT_GE(hits, 10);
}

TEST(Ils, AcceptedSolutionsStrictlyDecrease) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = fixtures::random_instance(seed, 15, 3);
    const auto r = ils_math(inst, quick(), 1, seed);
    EXPECT_TRUE(covers_all_ops(*inst, r.schedule));
    EXPECT_LE(r.twct, r.constructive_twct);
    std::optional<Time> last;
    Time best = INT64_MAX;
    for (const auto& e : r.log.events) {
      EXPECT_LE(e.best, best);
      best = e.best;
      if (e.phase != "accept") continue;
      if (last) EXPECT_LT(e.twct, *last);
      last = e.twct;
    }
  }
}

TEST(Ils, SinglePerturbationRound) {
  const auto inst = fixtures::random_instance(2, 12, 3);
  Params p = quick();
  p.omega_max = 1;
  const auto r = ils_math(inst, p, 2, 9);
  const auto perturbs = std::count_if(r.log.events.begin(), r.log.events.end(),
                                      [](const RunEvent& e) { return e.phase == "perturb"; });
  EXPECT_GE(perturbs, 1);
  // every extra round needs an improvement that resets the counter
  const auto improving = std::count_if(r.log.events.begin(), r.log.events.end(),
                                       [](const RunEvent& e) { return e.phase == "accept"; });
  EXPECT_LE(perturbs, 1 + improving);
}

TEST(Grasp, RestartsUntilNoImprovement) {
  const auto inst = fixtures::random_instance(6, 15, 3);
  Params p = quick();
  const auto r = grasp_math(inst, p, 2, 3);
  EXPECT_TRUE(covers_all_ops(*inst, r.schedule));
  const auto builds = std::count_if(r.log.events.begin(), r.log.events.end(),
                                    [](const RunEvent& e) { return e.phase == "construct"; });
  EXPECT_GE(builds, p.omega_max);
  Time best = INT64_MAX;
  for (const auto& e : r.log.events) {
    EXPECT_LE(e.best, best);
    best = e.best;
  }
}

TEST(Variants, SameSeedSameResult) {
  const auto inst = fixtures::random_instance(8, 15, 4);
  for (Method m : {Method::Ils, Method::Grasp}) {
    const auto a = run_variant(inst, m, 3, quick(), 77);
    const auto b = run_variant(inst, m, 3, quick(), 77);
    EXPECT_EQ(a.schedule, b.schedule);
    EXPECT_EQ(a.nodes, b.nodes);
    ASSERT_EQ(a.log.events.size(), b.log.events.size());
  }
}

TEST(Variants, ThreeSwitchesFormulationOnce) {
  const auto inst = fixtures::random_instance(5, 15, 3);
  for (Method m : {Method::Ils, Method::Grasp}) {
    const auto r = run_variant(inst, m, 3, quick(), 1);
    int switches = 0;
    for (size_t e = 1; e < r.log.events.size(); ++e)
      switches += r.log.events[e].formulation != r.log.events[e - 1].formulation;
    EXPECT_EQ(switches, 1);
    const auto it = std::find_if(r.log.events.begin(), r.log.events.end(),
                                 [](const RunEvent& e) { return e.formulation == Formulation::Sequencing; });
    ASSERT_NE(it, r.log.events.end());
    EXPECT_EQ(it->phase, "intensify");
  }
}

TEST(Variants, AllSixFeasibleAndAboveOptimum) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto inst = fixtures::random_instance(seed, 5, 2);
    const Time opt = brute_force_optimum(*inst).twct;
    for (Method m : {Method::Ils, Method::Grasp})
      for (int v = 1; v <= 3; ++v) {
        const auto r = run_variant(inst, m, v, quick(), seed);
        EXPECT_TRUE(covers_all_ops(*inst, r.schedule));
        EXPECT_GE(r.twct, opt);
        EXPECT_EQ(r.twct, evaluate(*inst, r.schedule).twct);
      }
  }
  EXPECT_THROW(run_variant(appendix(), Method::Ils, 4, quick(), 1), Error);
}

TEST(ParamsCheck, RejectsOutOfRange) {
  Params p;
  p.rho = 1.5;
  EXPECT_THROW(p.validate(), Error);
  p = Params{};
  p.omega_max = 0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(Params{}.validate());
}
