#include "plsv/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plsv/rng.hpp"

namespace plsv {

using nlohmann::json;

namespace {

enum StreamTag : std::uint64_t {
  kFamilies = 1,
  kOpAttributes = 2,
  kReleases = 3,
  kMachines = 4,
  kEligibility = 5,
  kJobs = 6,
  kAssociation = 7,
  kRepair = 8,
};

constexpr int kNumFamilies = 3;

}  // namespace

Time max_release_date(double release_factor, Time total_work, int num_machines) {
  const double v = release_factor * static_cast<double>(total_work) / num_machines;
  // guard against 0.1-style representation error pushing an integer over the edge
  return static_cast<Time>(std::ceil(v - 1e-9));
}

Instance generate(const GenParams& p) {
  if (p.num_ops < 1 || p.num_machines < 1)
    throw Error(ErrorKind::InvalidArgument, "generator needs at least one operation and machine");
  for (double f : {p.release_factor, p.eligibility_factor, p.job_assoc_factor})
    if (!(f >= 0.0 && f <= 1.0))
      throw Error(ErrorKind::InvalidArgument, "generator factors must lie in [0,1]");

  Instance inst;
  const int n = p.num_ops, m = p.num_machines, nj = std::max(1, n / 3);

  Rng fam_rng = Rng::stream(p.seed, kFamilies);
  inst.families.resize(kNumFamilies);
  for (auto& f : inst.families) f.setup = fam_rng.uniform_int(5, 10);

  Rng op_rng = Rng::stream(p.seed, kOpAttributes);
  inst.ops.resize(n);
  Time total = 0;
  for (auto& op : inst.ops) {
    op.family = static_cast<int>(op_rng.uniform_int(0, kNumFamilies - 1));
    op.processing = op_rng.uniform_int(1, 30);
    op.load = static_cast<int>(10 * op_rng.uniform_int(1, 10));
    total += op.processing + inst.families[op.family].setup;
  }

  const Time mr = max_release_date(p.release_factor, total, m);
  Rng rel_rng = Rng::stream(p.seed, kReleases);
  for (auto& op : inst.ops) op.release = rel_rng.uniform_int(0, mr);

  Rng mach_rng = Rng::stream(p.seed, kMachines);
  inst.machines.resize(m);
  for (auto& mc : inst.machines) mc.capacity = static_cast<int>(10 * mach_rng.uniform_int(8, 10));
  for (auto& mc : inst.machines) mc.release = rel_rng.uniform_int(0, mr);

  Rng el_rng = Rng::stream(p.seed, kEligibility);
  Rng repair = Rng::stream(p.seed, kRepair);
  int max_cap = 0;
  for (const auto& mc : inst.machines) max_cap = std::max(max_cap, mc.capacity);
  for (auto& op : inst.ops) {
    // no machine can carry this load at all: redraw it among the loads that fit
    while (op.load > max_cap) op.load = static_cast<int>(10 * repair.uniform_int(1, max_cap / 10));
    for (int attempt = 0;; ++attempt) {
      op.eligible.clear();
      for (int k = 0; k < m; ++k)
        if (el_rng.bernoulli(p.eligibility_factor) && op.load <= inst.machines[k].capacity)
          op.eligible.push_back(k);
      if (!op.eligible.empty()) break;
      if (attempt >= 1000) {
        std::vector<int> fits;
        for (int k = 0; k < m; ++k)
          if (op.load <= inst.machines[k].capacity) fits.push_back(k);
        op.eligible.push_back(fits[static_cast<size_t>(
            repair.uniform_int(0, static_cast<std::int64_t>(fits.size()) - 1))]);
        break;
      }
    }
  }

  Rng job_rng = Rng::stream(p.seed, kJobs);
  inst.jobs.resize(nj);
  for (auto& job : inst.jobs) job.weight = static_cast<int>(job_rng.uniform_int(1, 50));

  Rng as_rng = Rng::stream(p.seed, kAssociation);
  std::vector<int> op_jobs(n, 0);
  for (auto& job : inst.jobs)
    for (int i = 0; i < n; ++i)
      if (as_rng.bernoulli(p.job_assoc_factor)) {
        job.ops.push_back(i);
        ++op_jobs[i];
      }
  for (auto& job : inst.jobs)
    if (job.ops.empty()) {
      const int i = static_cast<int>(repair.uniform_int(0, n - 1));
      job.ops.push_back(i);
      ++op_jobs[i];
    }
  for (int i = 0; i < n; ++i)
    if (op_jobs[i] == 0) {
      auto& job = inst.jobs[static_cast<size_t>(repair.uniform_int(0, nj - 1))];
      job.ops.insert(std::upper_bound(job.ops.begin(), job.ops.end(), i), i);
    }

  require_valid(inst);
  return inst;
}

std::string instance_name(const GenParams& p, int replicate) {
  auto index_of = [](double v, std::initializer_list<double> grid) {
    int idx = 0;
    for (double g : grid) {
      if (std::abs(v - g) < 1e-9) return idx;
      ++idx;
    }
    return -1;
  };
  const int a = index_of(p.release_factor, {0.25, 0.5, 0.75});
  const int b = index_of(p.eligibility_factor, {0.7, 0.9});
  const int g = index_of(p.job_assoc_factor, {0.05, 0.15});
  std::ostringstream os;
  os << "o" << p.num_ops << "_m" << p.num_machines << "_";
  if (a < 0 || b < 0 || g < 0)
    os << "a" << p.release_factor << "b" << p.eligibility_factor << "g" << p.job_assoc_factor;
  else
    os << (a * 4 + b * 2 + g + 1);
  os << "_" << replicate;
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON codec

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

long long get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) field_error(where, std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) field_error(where + "." + key, "expected integer");
  return v.get<long long>();
}

std::vector<long long> get_int_list(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) field_error(where, std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_array()) field_error(where + "." + key, "expected array");
  std::vector<long long> out;
  for (size_t x = 0; x < v.size(); ++x) {
    if (!v[x].is_number_integer())
      field_error(where + "." + key + "[" + std::to_string(x) + "]", "expected integer");
    out.push_back(v[x].get<long long>());
  }
  return out;
}

const json& get_array(const json& doc, const char* key) {
  if (!doc.contains(key)) field_error("document", std::string("missing field '") + key + "'");
  if (!doc.at(key).is_array()) field_error(key, "expected array");
  return doc.at(key);
}

// Maps 1-based ids of one entity list to positions; rejects duplicates and gaps.
std::vector<size_t> id_positions(const json& arr, const char* list, const char* what) {
  std::vector<size_t> pos(arr.size(), SIZE_MAX);
  for (size_t x = 0; x < arr.size(); ++x) {
    const std::string where = std::string(list) + "[" + std::to_string(x) + "]";
    const long long id = get_int(arr[x], "id", where);
    if (id < 1 || id > static_cast<long long>(arr.size()))
      field_error(where + ".id", std::string(what) + " id " + std::to_string(id) +
                                     " out of range 1.." + std::to_string(arr.size()));
    if (pos[static_cast<size_t>(id - 1)] != SIZE_MAX)
      field_error(where + ".id", std::string("duplicate ") + what + " id " + std::to_string(id));
    pos[static_cast<size_t>(id - 1)] = x;
  }
  return pos;
}

json parse_json(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw Error(ErrorKind::Parse, "line 1: empty document");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t byte = std::min(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte ? byte - 1 : 0), '\n');
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  // Hand-written so that each entity sits on one line; stable byte output.
  std::ostringstream os;
  auto list = [&](const std::vector<int>& v) {
    os << "[";
    for (size_t x = 0; x < v.size(); ++x) os << (x ? "," : "") << v[x] + 1;
    os << "]";
  };
  os << "{\n  \"version\": 1,\n  \"ops\": [\n";
  for (int i = 0; i < inst.num_ops(); ++i) {
    const auto& op = inst.ops[i];
    os << "    {\"id\": " << i + 1 << ", \"p\": " << op.processing << ", \"r\": " << op.release
       << ", \"l\": " << op.load << ", \"f\": " << op.family + 1 << ", \"eligible\": ";
    list(op.eligible);
    os << "}" << (i + 1 < inst.num_ops() ? "," : "") << "\n";
  }
  os << "  ],\n  \"jobs\": [\n";
  for (int j = 0; j < inst.num_jobs(); ++j) {
    os << "    {\"id\": " << j + 1 << ", \"w\": " << inst.jobs[j].weight << ", \"ops\": ";
    list(inst.jobs[j].ops);
    os << "}" << (j + 1 < inst.num_jobs() ? "," : "") << "\n";
  }
  os << "  ],\n  \"machines\": [\n";
  for (int k = 0; k < inst.num_machines(); ++k)
    os << "    {\"id\": " << k + 1 << ", \"r\": " << inst.machines[k].release
       << ", \"q\": " << inst.machines[k].capacity << "}"
       << (k + 1 < inst.num_machines() ? "," : "") << "\n";
  os << "  ],\n  \"families\": [\n";
  for (int f = 0; f < inst.num_families(); ++f)
    os << "    {\"id\": " << f + 1 << ", \"s\": " << inst.families[f].setup << "}"
       << (f + 1 < inst.num_families() ? "," : "") << "\n";
  os << "  ]\n}\n";
  return os.str();
}

Instance instance_from_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "document: expected object");
  const long long version = get_int(doc, "version", "document");
  if (version != 1)
    throw Error(ErrorKind::Parse, "document.version: unsupported schema version " +
                                      std::to_string(version));

  const json& ops = get_array(doc, "ops");
  const json& jobs = get_array(doc, "jobs");
  const json& machines = get_array(doc, "machines");
  const json& families = get_array(doc, "families");

  Instance inst;
  {
    const auto pos = id_positions(families, "families", "family");
    inst.families.resize(families.size());
    for (size_t f = 0; f < pos.size(); ++f)
      inst.families[f].setup = get_int(families[pos[f]], "s", "families[" + std::to_string(pos[f]) + "]");
  }
  {
    const auto pos = id_positions(machines, "machines", "machine");
    inst.machines.resize(machines.size());
    for (size_t k = 0; k < pos.size(); ++k) {
      const std::string where = "machines[" + std::to_string(pos[k]) + "]";
      inst.machines[k].release = get_int(machines[pos[k]], "r", where);
      inst.machines[k].capacity = static_cast<int>(get_int(machines[pos[k]], "q", where));
    }
  }
  {
    const auto pos = id_positions(ops, "ops", "operation");
    inst.ops.resize(ops.size());
    for (size_t i = 0; i < pos.size(); ++i) {
      const std::string where = "ops[" + std::to_string(pos[i]) + "]";
      const json& o = ops[pos[i]];
      auto& op = inst.ops[i];
      op.processing = get_int(o, "p", where);
      op.release = get_int(o, "r", where);
      op.load = static_cast<int>(get_int(o, "l", where));
      op.family = static_cast<int>(get_int(o, "f", where)) - 1;
      for (long long k : get_int_list(o, "eligible", where)) op.eligible.push_back(static_cast<int>(k) - 1);
    }
  }
  {
    const auto pos = id_positions(jobs, "jobs", "job");
    inst.jobs.resize(jobs.size());
    for (size_t j = 0; j < pos.size(); ++j) {
      const std::string where = "jobs[" + std::to_string(pos[j]) + "]";
      inst.jobs[j].weight = static_cast<int>(get_int(jobs[pos[j]], "w", where));
      for (long long i : get_int_list(jobs[pos[j]], "ops", where))
        inst.jobs[j].ops.push_back(static_cast<int>(i) - 1);
    }
  }
  require_valid(inst);
  return inst;
}

std::string schedule_to_json(const Schedule& sched) {
  std::ostringstream os;
  os << "{\n  \"version\": 1,\n  \"machines\": [\n";
  for (int k = 0; k < sched.num_machines(); ++k) {
    os << "    {\"id\": " << k + 1 << ", \"batches\": [";
    const auto& m = sched.machines[k];
    for (size_t b = 0; b < m.size(); ++b) {
      os << (b ? ", " : "") << "[";
      for (size_t x = 0; x < m[b].ops.size(); ++x) os << (x ? "," : "") << m[b].ops[x] + 1;
      os << "]";
    }
    os << "]}" << (k + 1 < sched.num_machines() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

Schedule schedule_from_json(const Instance& inst, const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "document: expected object");
  const long long version = get_int(doc, "version", "document");
  if (version != 1)
    throw Error(ErrorKind::Parse, "document.version: unsupported schema version " +
                                      std::to_string(version));
  const json& machines = get_array(doc, "machines");
  const auto pos = id_positions(machines, "machines", "machine");
  if (static_cast<int>(pos.size()) != inst.num_machines())
    throw Error(ErrorKind::Parse, "machines: schedule lists " + std::to_string(pos.size()) +
                                      " machines, instance has " +
                                      std::to_string(inst.num_machines()));
  Schedule sched(inst.num_machines());
  for (size_t k = 0; k < pos.size(); ++k) {
    const std::string where = "machines[" + std::to_string(pos[k]) + "]";
    const json& m = machines[pos[k]];
    if (!m.contains("batches") || !m.at("batches").is_array())
      field_error(where, "missing array 'batches'");
    const json& batches = m.at("batches");
    for (size_t b = 0; b < batches.size(); ++b) {
      const std::string bw = where + ".batches[" + std::to_string(b) + "]";
      if (!batches[b].is_array() || batches[b].empty()) field_error(bw, "expected nonempty array");
      Batch batch;
      for (size_t x = 0; x < batches[b].size(); ++x) {
        if (!batches[b][x].is_number_integer()) field_error(bw, "expected integer operation id");
        const long long id = batches[b][x].get<long long>();
        if (id < 1 || id > inst.num_ops())
          field_error(bw, "unknown operation id " + std::to_string(id));
        batch.ops.push_back(static_cast<int>(id) - 1);
      }
      batch.family = inst.ops[batch.ops.front()].family;
      sched.machines[k].push_back(std::move(batch));
    }
  }
  return sched;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

Instance read_instance(const std::string& path) {
  try {
    return instance_from_json(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_instance(const Instance& inst, const std::string& path) {
  write_text_file(path, instance_to_json(inst));
}

Schedule read_schedule(const Instance& inst, const std::string& path) {
  try {
    return schedule_from_json(inst, read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_schedule(const Schedule& sched, const std::string& path) {
  write_text_file(path, schedule_to_json(sched));
}

std::map<std::string, Time> read_bks(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::map<std::string, Time> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::Parse, path + ": line " + std::to_string(lineno) + ": expected name,twct");
    const std::string name = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw Error(ErrorKind::Parse, path + ": line " + std::to_string(lineno) + ": bad twct '" + value + "'");
    }
    if (used != value.size())
      throw Error(ErrorKind::Parse, path + ": line " + std::to_string(lineno) + ": bad twct '" + value + "'");
    if (out.count(name))
      throw Error(ErrorKind::Parse, path + ": line " + std::to_string(lineno) + ": duplicate instance " + name);
    out[name] = v;
  }
  return out;
}

}  // namespace plsv
