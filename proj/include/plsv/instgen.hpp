#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "plsv/instance.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

struct GenParams {
  int num_ops = 15;
  int num_machines = 4;
  double release_factor = 0.5;      // alpha of the generator
  double eligibility_factor = 0.9;  // beta
  double job_assoc_factor = 0.15;   // gamma
  std::uint64_t seed = 1;
};

// Maximum release date MR = ceil(release_factor * sum_i (p_i + s_{f_i}) / |M|).
Time max_release_date(double release_factor, Time total_work, int num_machines);

Instance generate(const GenParams& p);

// o{|O|}_m{|M|}_{combo}_{replicate}; combo is 1..12 over (alpha, beta, gamma) in
// that nesting order, taken from the standard grid.
std::string instance_name(const GenParams& p, int replicate);

// Instance JSON (schema version 1):
// { "version": 1, "ops": [{id,p,r,l,f,eligible[]}], "jobs": [{id,w,ops[]}],
//   "machines": [{id,r,q}], "families": [{id,s}] }
// Ids are 1-based and must be a permutation of 1..n within each list.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

// Schedule JSON: { "version": 1, "machines": [{ "id": k, "batches": [[op ids...], ...] }] }.
// Batch families are taken from the member operations.
std::string schedule_to_json(const Schedule& sched);
Schedule schedule_from_json(const Instance& inst, const std::string& text);
Schedule read_schedule(const Instance& inst, const std::string& path);
void write_schedule(const Schedule& sched, const std::string& path);

// BKS file: CSV lines "instance_name,twct"; an optional header line is skipped.
std::map<std::string, Time> read_bks(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace plsv
