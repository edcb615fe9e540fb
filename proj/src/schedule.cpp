#include "plsv/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace plsv {

int Schedule::num_batches() const {
  int n = 0;
  for (const auto& m : machines) n += static_cast<int>(m.size());
  return n;
}

void Schedule::drop_empty() {
  for (auto& m : machines)
    m.erase(std::remove_if(m.begin(), m.end(), [](const Batch& b) { return b.ops.empty(); }),
            m.end());
}

EvalResult evaluate(const Instance& inst, const Schedule& sched) {
  if (sched.num_machines() != inst.num_machines())
    throw Error(ErrorKind::InvalidArgument, "schedule has " +
                                                std::to_string(sched.num_machines()) +
                                                " machines, instance has " +
                                                std::to_string(inst.num_machines()));
  EvalResult res;
  res.op_completion.assign(inst.ops.size(), -1);
  res.batch_start.resize(inst.machines.size());
  res.batch_processing.resize(inst.machines.size());

  for (int k = 0; k < sched.num_machines(); ++k) {
    Time t = inst.machines[k].release;
    for (size_t b = 0; b < sched.machines[k].size(); ++b) {
      const Batch& batch = sched.machines[k][b];
      if (batch.ops.empty())
        throw Error(ErrorKind::InvalidArgument, "empty batch " + std::to_string(b + 1) +
                                                    " on machine " + std::to_string(k + 1));
      if (batch.family < 0 || batch.family >= inst.num_families())
        throw Error(ErrorKind::InvalidArgument, "batch with unknown family on machine " +
                                                    std::to_string(k + 1));
      Time start = t;
      for (int i : batch.ops) {
        if (i < 0 || i >= inst.num_ops())
          throw Error(ErrorKind::InvalidArgument, "unknown operation " + std::to_string(i + 1));
        if (res.op_completion[i] != -1)
          throw Error(ErrorKind::InvalidArgument,
                      "operation " + std::to_string(i + 1) + " scheduled twice");
        res.op_completion[i] = 0;
        start = std::max(start, inst.ops[i].release);
      }
      Time c = start + inst.families[batch.family].setup;
      for (int i : batch.ops) {
        c += inst.ops[i].processing;
        res.op_completion[i] = c;
      }
      res.batch_start[k].push_back(start);
      res.batch_processing[k].push_back(c - start);
      t = c;
    }
  }
  for (int i = 0; i < inst.num_ops(); ++i) {
    if (res.op_completion[i] < 0)
      throw Error(ErrorKind::InvalidArgument,
                  "operation " + std::to_string(i + 1) + " is not scheduled");
    res.cmax = std::max(res.cmax, res.op_completion[i]);
  }
  res.job_completion.assign(inst.jobs.size(), 0);
  for (int j = 0; j < inst.num_jobs(); ++j) {
    Time c = 0;
    for (int i : inst.jobs[j].ops) c = std::max(c, res.op_completion[i]);
    res.job_completion[j] = c;
    res.twct += inst.jobs[j].weight * c;
  }
  return res;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Coverage: return "coverage";
    case ViolationKind::Family: return "family homogeneity";
    case ViolationKind::Capacity: return "capacity";
    case ViolationKind::Eligibility: return "eligibility";
    case ViolationKind::EmptyBatch: return "empty batch";
    case ViolationKind::UnknownMachine: return "machine count";
  }
  return "?";
}

std::vector<Violation> check_feasibility(const Instance& inst, const Schedule& sched) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, int k, int b, int i, std::string msg) {
    out.push_back({kind, k, b, i, std::move(msg)});
  };
  if (sched.num_machines() != inst.num_machines())
    add(ViolationKind::UnknownMachine, -1, -1, -1,
        "schedule has " + std::to_string(sched.num_machines()) + " machines, instance has " +
            std::to_string(inst.num_machines()));

  std::vector<int> seen(inst.ops.size(), 0);
  const int nm = std::min(sched.num_machines(), inst.num_machines());
  for (int k = 0; k < nm; ++k) {
    for (int b = 0; b < static_cast<int>(sched.machines[k].size()); ++b) {
      const Batch& batch = sched.machines[k][b];
      const std::string where =
          " (machine " + std::to_string(k + 1) + ", batch " + std::to_string(b + 1) + ")";
      if (batch.ops.empty()) add(ViolationKind::EmptyBatch, k, b, -1, "empty batch" + where);
      long load = 0;
      for (int i : batch.ops) {
        if (i < 0 || i >= inst.num_ops()) {
          add(ViolationKind::Coverage, k, b, i, "unknown operation " + std::to_string(i + 1) + where);
          continue;
        }
        ++seen[i];
        load += inst.ops[i].load;
        if (inst.ops[i].family != batch.family)
          add(ViolationKind::Family, k, b, i,
              "operation " + std::to_string(i + 1) + " of family " +
                  std::to_string(inst.ops[i].family + 1) + " in batch of family " +
                  std::to_string(batch.family + 1) + where);
        if (!inst.eligible(i, k))
          add(ViolationKind::Eligibility, k, b, i,
              "operation " + std::to_string(i + 1) + " not eligible" + where);
      }
      if (load > inst.machines[k].capacity)
        add(ViolationKind::Capacity, k, b, -1,
            "load " + std::to_string(load) + " exceeds capacity " +
                std::to_string(inst.machines[k].capacity) + where);
    }
  }
  for (int i = 0; i < inst.num_ops(); ++i) {
    if (seen[i] == 0)
      add(ViolationKind::Coverage, -1, -1, i, "operation " + std::to_string(i + 1) + " missing");
    else if (seen[i] > 1)
      add(ViolationKind::Coverage, -1, -1, i,
          "operation " + std::to_string(i + 1) + " scheduled " + std::to_string(seen[i]) +
              " times");
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) os << to_string(v.kind) << ": " << v.message << "\n";
  return os.str();
}

}  // namespace plsv
