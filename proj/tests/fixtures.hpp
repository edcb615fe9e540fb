#pragma once

#include <memory>
#include <string>

#include "plsv/instgen.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PLSV_DATA_DIR) + "/" + name; }

// 15 operations, 5 jobs, 4 machines, 3 families
inline plsv::Instance appendix_b() { return plsv::read_instance(data_path("appendix_b.json")); }

// m1: [4][10][1]  m2: [9,8][5][11]  m3: [12][3][13][2]  m4: [14][6][15,7]
inline plsv::Schedule figure1(const plsv::Instance& inst) {
  return plsv::read_schedule(inst, data_path("figure1_schedule.json"));
}

inline std::shared_ptr<const plsv::Instance> random_instance(std::uint64_t seed, int ops, int machines) {
  plsv::GenParams g;
  g.num_ops = ops;
  g.num_machines = machines;
  g.seed = seed;
  return std::make_shared<const plsv::Instance>(plsv::generate(g));
}

// 1-based operation ids to indices
inline std::vector<int> idx(std::initializer_list<int> ids) {
  std::vector<int> v;
  for (int i : ids) v.push_back(i - 1);
  return v;
}

}  // namespace fixtures
