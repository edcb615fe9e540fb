#include "plsv/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace plsv {

bool Instance::eligible(int op, int machine) const {
  const auto& el = ops[op].eligible;
  return std::binary_search(el.begin(), el.end(), machine);
}

void Instance::derive_maps() {
  jobs_of_op_.assign(ops.size(), {});
  ops_of_machine_.assign(machines.size(), {});
  for (int j = 0; j < num_jobs(); ++j)
    for (int i : jobs[j].ops)
      if (i >= 0 && i < num_ops()) jobs_of_op_[i].push_back(j);
  for (int i = 0; i < num_ops(); ++i)
    for (int k : ops[i].eligible)
      if (k >= 0 && k < num_machines()) ops_of_machine_[k].push_back(i);
}

bool Instance::operator==(const Instance& o) const {
  if (ops.size() != o.ops.size() || jobs.size() != o.jobs.size() ||
      machines.size() != o.machines.size() || families.size() != o.families.size())
    return false;
  for (size_t i = 0; i < ops.size(); ++i) {
    const auto &a = ops[i], &b = o.ops[i];
    if (a.processing != b.processing || a.release != b.release || a.load != b.load ||
        a.family != b.family || a.eligible != b.eligible)
      return false;
  }
  for (size_t j = 0; j < jobs.size(); ++j)
    if (jobs[j].weight != o.jobs[j].weight || jobs[j].ops != o.jobs[j].ops) return false;
  for (size_t k = 0; k < machines.size(); ++k)
    if (machines[k].release != o.machines[k].release ||
        machines[k].capacity != o.machines[k].capacity)
      return false;
  for (size_t f = 0; f < families.size(); ++f)
    if (families[f].setup != o.families[f].setup) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (size_t v = 0; v < violations.size(); ++v) {
    if (v) os << "; ";
    os << violations[v];
  }
  return os.str();
}

ValidationReport validate_instance(Instance& inst) {
  ValidationReport rep;
  auto add = [&](const std::string& s) { rep.violations.push_back(s); };

  if (inst.ops.empty()) add("instance has no operations");
  if (inst.machines.empty()) add("instance has no machines");
  if (inst.families.empty()) add("instance has no families");
  if (inst.jobs.empty()) add("instance has no jobs");

  for (int f = 0; f < inst.num_families(); ++f)
    if (inst.families[f].setup < 0)
      add("family " + std::to_string(f + 1) + ": negative setup time");

  for (int k = 0; k < inst.num_machines(); ++k) {
    const auto& m = inst.machines[k];
    if (m.release < 0) add("machine " + std::to_string(k + 1) + ": negative release date");
    if (m.capacity < 1) add("machine " + std::to_string(k + 1) + ": capacity below 1");
  }

  for (int i = 0; i < inst.num_ops(); ++i) {
    auto& op = inst.ops[i];
    const std::string tag = "operation " + std::to_string(i + 1) + ": ";
    if (op.processing < 1) add(tag + "processing time below 1");
    if (op.release < 0) add(tag + "negative release date");
    if (op.load < 0) add(tag + "negative load");
    if (op.family < 0 || op.family >= inst.num_families()) add(tag + "unknown family");
    std::sort(op.eligible.begin(), op.eligible.end());
    if (std::adjacent_find(op.eligible.begin(), op.eligible.end()) != op.eligible.end())
      add(tag + "duplicate eligible machine");
    if (op.eligible.empty()) add(tag + "no eligible machine");
    for (int k : op.eligible) {
      if (k < 0 || k >= inst.num_machines()) {
        add(tag + "unknown eligible machine " + std::to_string(k + 1));
        continue;
      }
      if (op.load > inst.machines[k].capacity)
        add(tag + "load exceeds capacity of eligible machine " + std::to_string(k + 1));
    }
  }

  std::vector<int> op_jobs(inst.ops.size(), 0);
  for (int j = 0; j < inst.num_jobs(); ++j) {
    auto& job = inst.jobs[j];
    const std::string tag = "job " + std::to_string(j + 1) + ": ";
    if (job.weight < 1) add(tag + "weight below 1");
    std::sort(job.ops.begin(), job.ops.end());
    if (std::adjacent_find(job.ops.begin(), job.ops.end()) != job.ops.end())
      add(tag + "duplicate operation");
    if (job.ops.empty()) add(tag + "no operations");
    for (int i : job.ops) {
      if (i < 0 || i >= inst.num_ops())
        add(tag + "unknown operation " + std::to_string(i + 1));
      else
        ++op_jobs[i];
    }
  }
  for (int i = 0; i < inst.num_ops(); ++i)
    if (op_jobs[i] == 0) add("operation " + std::to_string(i + 1) + ": belongs to no job");

  if (rep.ok()) inst.derive_maps();
  return rep;
}

void require_valid(Instance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) throw Error(ErrorKind::InvalidArgument, "invalid instance: " + rep.to_string());
}

std::vector<Fraction> estimated_weights(const Instance& inst) {
  std::vector<Fraction> w(inst.ops.size());
  for (int i = 0; i < inst.num_ops(); ++i) {
    Fraction acc{0, 1};
    for (int j : inst.jobs_of_op()[i]) {
      const std::int64_t n = inst.jobs[j].weight;
      const std::int64_t d = static_cast<std::int64_t>(inst.jobs[j].ops.size());
      const std::int64_t l = std::lcm(acc.den, d);
      acc.num = acc.num * (l / acc.den) + n * (l / d);
      acc.den = l;
      const std::int64_t g = std::gcd(acc.num, acc.den);
      if (g > 1) {
        acc.num /= g;
        acc.den /= g;
      }
    }
    w[i] = acc;
  }
  return w;
}

}  // namespace plsv
