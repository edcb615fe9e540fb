#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"

using namespace plsv;

namespace {

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("plsv_test_" + name)).string();
}

Error parse_error_of(const std::string& text) {
  try {
    instance_from_json(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text.substr(0, 60);
  return Error(ErrorKind::Internal, "");
}

}  // namespace

TEST(Generate, SameSeedSameBytes) {
  GenParams g;
  g.seed = 99;
  EXPECT_EQ(instance_to_json(generate(g)), instance_to_json(generate(g)));
  GenParams h = g;
  h.seed = 100;
  EXPECT_NE(instance_to_json(generate(g)), instance_to_json(generate(h)));
}

TEST(Generate, JobAndFamilyCounts) {
  GenParams g;
  g.num_ops = 15;
  g.num_machines = 4;
  const Instance inst = generate(g);
  EXPECT_EQ(inst.num_jobs(), 5);
  EXPECT_EQ(inst.num_families(), 3);
  EXPECT_EQ(inst.num_ops(), 15);
  EXPECT_EQ(inst.num_machines(), 4);
}

TEST(Generate, MaxReleaseDate) {
  EXPECT_EQ(max_release_date(0.25, 400, 4), 25);
  EXPECT_EQ(max_release_date(0.5, 401, 4), 51);
  EXPECT_EQ(max_release_date(0.75, 0, 2), 0);
}

TEST(Generate, AttributeRangesOverGrid) {
  std::uint64_t seed = 1;
  for (int n : {15, 25, 50})
    for (int m : {2, 4})
      for (double a : {0.25, 0.5, 0.75})
        for (double b : {0.7, 0.9})
          for (double c : {0.05, 0.15}) {
            GenParams g{n, m, a, b, c, seed++};
            Instance inst = generate(g);
            ASSERT_TRUE(validate_instance(inst).ok());
            Time total = 0;
            for (const auto& op : inst.ops) total += op.processing + inst.setup_of(&op - inst.ops.data());
            const Time mr = max_release_date(a, total, m);
            for (const auto& f : inst.families) EXPECT_TRUE(f.setup >= 5 && f.setup <= 10);
            for (const auto& op : inst.ops) {
              EXPECT_TRUE(op.processing >= 1 && op.processing <= 30);
              EXPECT_TRUE(op.load >= 10 && op.load <= 100 && op.load % 10 == 0);
              EXPECT_TRUE(op.release >= 0 && op.release <= mr);
              for (int k : op.eligible) EXPECT_LE(op.load, inst.machines[k].capacity);
            }
            for (const auto& mc : inst.machines) {
              EXPECT_TRUE(mc.capacity == 80 || mc.capacity == 90 || mc.capacity == 100);
              EXPECT_TRUE(mc.release >= 0 && mc.release <= mr);
            }
            for (const auto& j : inst.jobs) EXPECT_TRUE(j.weight >= 1 && j.weight <= 50);
          }
}

TEST(Generate, DistributionMeans) {
  double p_sum = 0, s_sum = 0;
  int p_count = 0, s_count = 0;
  for (std::uint64_t seed = 1; p_count < 10000 || s_count < 10000; ++seed) {
    GenParams g;
    g.num_ops = 3;
    g.num_machines = 1;
    g.seed = seed;
    const Instance inst = generate(g);
    for (const auto& op : inst.ops) p_sum += op.processing, ++p_count;
    for (const auto& f : inst.families) s_sum += f.setup, ++s_count;
  }
  EXPECT_NEAR(p_sum / p_count, 15.5, 0.05 * 15.5);
  EXPECT_NEAR(s_sum / s_count, 7.5, 0.05 * 7.5);
}

TEST(Generate, RejectsBadParams) {
  GenParams g;
  g.num_ops = 0;
  EXPECT_THROW(generate(g), Error);
  g = GenParams{};
  g.eligibility_factor = 1.5;
  EXPECT_THROW(generate(g), Error);
}

TEST(Naming, ComboIndex) {
  EXPECT_EQ(instance_name(GenParams{15, 4, 0.25, 0.7, 0.05, 1}, 1), "o15_m4_1_1");
  EXPECT_EQ(instance_name(GenParams{25, 2, 0.5, 0.9, 0.05, 1}, 3), "o25_m2_7_3");
  EXPECT_EQ(instance_name(GenParams{50, 4, 0.75, 0.9, 0.15, 1}, 5), "o50_m4_12_5");
}

TEST(Codec, AppendixRoundTrip) {
  const Instance inst = fixtures::appendix_b();
  EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
  const std::string path = temp_file("appendix.json");
  write_instance(inst, path);
  EXPECT_EQ(read_instance(path), inst);
  std::filesystem::remove(path);
}

TEST(Codec, GeneratedRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::random_instance(seed, 25, 3);
    const std::string text = instance_to_json(*inst);
    EXPECT_EQ(instance_from_json(text), *inst);
    EXPECT_EQ(instance_to_json(instance_from_json(text)), text);
  }
}

TEST(Codec, EmptyDocument) {
  EXPECT_EQ(parse_error_of("").kind(), ErrorKind::Parse);
  EXPECT_EQ(parse_error_of("   \n").kind(), ErrorKind::Parse);
}

TEST(Codec, DuplicateOperationId) {
  auto doc = nlohmann::json::parse(instance_to_json(fixtures::appendix_b()));
  doc["ops"][4]["id"] = 3;
  const Error e = parse_error_of(doc.dump());
  EXPECT_EQ(e.kind(), ErrorKind::Parse);
  EXPECT_NE(std::string(e.what()).find("duplicate operation id 3"), std::string::npos) << e.what();
}

TEST(Codec, FieldErrorsCarryLocus) {
  auto doc = nlohmann::json::parse(instance_to_json(fixtures::appendix_b()));
  doc["ops"][2].erase("p");
  const Error e = parse_error_of(doc.dump());
  EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos) << e.what();
  EXPECT_EQ(parse_error_of("{\"version\": 1,").kind(), ErrorKind::Parse);
}

TEST(Codec, InvalidInstanceSurfacesReport) {
  auto doc = nlohmann::json::parse(instance_to_json(fixtures::appendix_b()));
  doc["ops"][0]["l"] = 200;
  try {
    instance_from_json(doc.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("load exceeds capacity"), std::string::npos) << e.what();
  }
}

TEST(Codec, ScheduleRoundTrip) {
  const Instance inst = fixtures::appendix_b();
  const Schedule s = fixtures::figure1(inst);
  EXPECT_EQ(schedule_from_json(inst, schedule_to_json(s)), s);
  EXPECT_EQ(s.machines[1][0].ops, fixtures::idx({9, 8}));
}

TEST(Codec, BksFile) {
  const std::string path = temp_file("bks.csv");
  write_text_file(path, "name,twct\no15_m2_1_1,1234\no15_m2_1_2,99\n");
  const auto bks = read_bks(path);
  ASSERT_EQ(bks.size(), 2u);
  EXPECT_EQ(bks.at("o15_m2_1_1"), 1234);
  write_text_file(path, "o15_m2_1_1,12x\n");
  EXPECT_THROW(read_bks(path), Error);
  write_text_file(path, "a,1\na,2\n");
  EXPECT_THROW(read_bks(path), Error);
  std::filesystem::remove(path);
  try {
    read_bks(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}
