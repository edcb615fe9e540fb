#include "plsv/plsv.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>

#include "plsv/bench.hpp"
#include "plsv/construct.hpp"
#include "plsv/gantt.hpp"
#include "plsv/instgen.hpp"
#include "plsv/model.hpp"
#include "plsv/precedence.hpp"
#include "plsv/search.hpp"
#include "plsv/subsolve.hpp"

struct plsv_instance {
  std::shared_ptr<const plsv::Instance> inst;
};

struct plsv_schedule {
  plsv::Schedule sched;
};

struct plsv_params {
  plsv::Params params;
};

namespace {

thread_local std::string last_error;

plsv_status code_of(plsv::ErrorKind k) {
  switch (k) {
    case plsv::ErrorKind::InvalidArgument: return PLSV_E_INVALID_ARGUMENT;
    case plsv::ErrorKind::Parse: return PLSV_E_PARSE;
    case plsv::ErrorKind::Infeasible: return PLSV_E_INFEASIBLE;
    case plsv::ErrorKind::Io: return PLSV_E_IO;
    case plsv::ErrorKind::Limit: return PLSV_E_LIMIT;
    case plsv::ErrorKind::Internal: return PLSV_E_INTERNAL;
  }
  return PLSV_E_INTERNAL;
}

template <class F>
plsv_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return PLSV_OK;
  } catch (const plsv::Error& e) {
    last_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PLSV_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PLSV_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw plsv::Error(plsv::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

void require_feasible(const plsv::Instance& inst, const plsv::Schedule& s) {
  const auto v = plsv::check_feasibility(inst, s);
  if (!v.empty()) throw plsv::Error(plsv::ErrorKind::Infeasible, "infeasible schedule: " + plsv::describe(v));
}

}  // namespace

extern "C" {

const char* plsv_last_error(void) { return last_error.c_str(); }

const char* plsv_status_name(plsv_status s) {
  switch (s) {
    case PLSV_OK: return "ok";
    case PLSV_E_INVALID_ARGUMENT: return "invalid_argument";
    case PLSV_E_PARSE: return "parse";
    case PLSV_E_INFEASIBLE: return "infeasible";
    case PLSV_E_IO: return "io";
    case PLSV_E_LIMIT: return "limit";
    case PLSV_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* plsv_version(void) { return "1.0.0"; }

void plsv_string_free(char* s) { std::free(s); }

plsv_params* plsv_params_new(void) { return new (std::nothrow) plsv_params{}; }

void plsv_params_free(plsv_params* p) { delete p; }

plsv_status plsv_params_set(plsv_params* p, const char* key, const char* value) {
  return guard([&] {
    need(p, "params");
    need(key, "key");
    need(value, "value");
    plsv::Params next = p->params;
    plsv::apply_param(next, key, value);
    p->params = next;
  });
}

plsv_status plsv_params_load_text(plsv_params* p, const char* text) {
  return guard([&] {
    need(p, "params");
    need(text, "text");
    p->params = plsv::parse_params(text, p->params);
  });
}

plsv_status plsv_instance_generate(int num_ops, int num_machines, double release_factor, double eligibility_factor,
                                   double job_assoc_factor, uint64_t seed, plsv_instance** out) {
  return guard([&] {
    need(out, "out");
    plsv::GenParams g{num_ops, num_machines, release_factor, eligibility_factor, job_assoc_factor, seed};
    *out = new plsv_instance{std::make_shared<const plsv::Instance>(plsv::generate(g))};
  });
}

plsv_status plsv_instance_name(int num_ops, int num_machines, double release_factor, double eligibility_factor,
                               double job_assoc_factor, int replicate, char** out) {
  return guard([&] {
    need(out, "out");
    plsv::GenParams g{num_ops, num_machines, release_factor, eligibility_factor, job_assoc_factor, 0};
    *out = dup(plsv::instance_name(g, replicate));
  });
}

plsv_status plsv_instance_read(const char* path, plsv_instance** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new plsv_instance{std::make_shared<const plsv::Instance>(plsv::read_instance(path))};
  });
}

plsv_status plsv_instance_write(const plsv_instance* inst, const char* path) {
  return guard([&] {
    need(inst, "instance");
    need(path, "path");
    plsv::write_instance(*inst->inst, path);
  });
}

plsv_status plsv_instance_to_json(const plsv_instance* inst, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(plsv::instance_to_json(*inst->inst));
  });
}

plsv_status plsv_instance_size(const plsv_instance* inst, int* ops, int* jobs, int* machines, int* families) {
  return guard([&] {
    need(inst, "instance");
    if (ops) *ops = inst->inst->num_ops();
    if (jobs) *jobs = inst->inst->num_jobs();
    if (machines) *machines = inst->inst->num_machines();
    if (families) *families = inst->inst->num_families();
  });
}

void plsv_instance_free(plsv_instance* inst) { delete inst; }

plsv_status plsv_schedule_read(const plsv_instance* inst, const char* path, plsv_schedule** out) {
  return guard([&] {
    need(inst, "instance");
    need(path, "path");
    need(out, "out");
    *out = new plsv_schedule{plsv::read_schedule(*inst->inst, path)};
  });
}

plsv_status plsv_schedule_write(const plsv_schedule* s, const char* path) {
  return guard([&] {
    need(s, "schedule");
    need(path, "path");
    plsv::write_schedule(s->sched, path);
  });
}

plsv_status plsv_schedule_to_json(const plsv_schedule* s, char** out) {
  return guard([&] {
    need(s, "schedule");
    need(out, "out");
    *out = dup(plsv::schedule_to_json(s->sched));
  });
}

void plsv_schedule_free(plsv_schedule* s) { delete s; }

plsv_status plsv_evaluate(const plsv_instance* inst, const plsv_schedule* s, int64_t* twct) {
  return guard([&] {
    need(inst, "instance");
    need(s, "schedule");
    need(twct, "twct");
    require_feasible(*inst->inst, s->sched);
    *twct = plsv::evaluate(*inst->inst, s->sched).twct;
  });
}

plsv_status plsv_evaluate_report(const plsv_instance* inst, const plsv_schedule* s, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(s, "schedule");
    need(out, "out");
    require_feasible(*inst->inst, s->sched);
    const auto ev = plsv::evaluate(*inst->inst, s->sched);
    std::ostringstream os;
    for (size_t j = 0; j < ev.job_completion.size(); ++j)
      os << "C" << j + 1 << " " << ev.job_completion[j] << "\n";
    os << "cmax " << ev.cmax << "\ntwct " << ev.twct << "\n";
    *out = dup(os.str());
  });
}

plsv_status plsv_solve(const plsv_instance* inst, const char* method, const plsv_params* p, uint64_t seed,
                       plsv_schedule** out, int64_t* twct, char** log_csv) {
  return guard([&] {
    need(inst, "instance");
    need(method, "method");
    need(out, "out");
    const plsv::Params params = p ? p->params : plsv::Params{};
    plsv::Schedule sched;
    std::ostringstream log;
    log << "seconds,nodes,twct,best,phase,formulation\n";
    if (std::string(method) == "wmct") {
      sched = plsv::wmct_wavga(*inst->inst);
    } else {
      const auto m = plsv::parse_method(method);
      auto res = plsv::run_variant(inst->inst, m.method, m.variant, params, seed);
      for (const auto& e : res.log.events)
        log << e.seconds << ',' << e.work << ',' << e.twct << ',' << e.best << ',' << e.phase << ','
            << plsv::to_string(e.formulation) << '\n';
      sched = std::move(res.schedule);
    }
    require_feasible(*inst->inst, sched);
    const auto value = plsv::evaluate(*inst->inst, sched).twct;
    char* log_text = log_csv ? dup(log.str()) : nullptr;
    *out = new plsv_schedule{std::move(sched)};
    if (twct) *twct = value;
    if (log_csv) *log_csv = log_text;
  });
}

plsv_status plsv_bench(const plsv_instance* const* instances, const char* const* names, size_t count,
                       const char* methods, int runs, uint64_t seed, const plsv_params* p, const char* bks_path,
                       const char* out_dir, int workers, int deterministic) {
  return guard([&] {
    need(instances, "instances");
    need(names, "names");
    need(methods, "methods");
    need(out_dir, "out_dir");
    plsv::BenchConfig cfg;
    for (size_t i = 0; i < count; ++i) {
      need(instances[i], "instance");
      need(names[i], "name");
      cfg.instances.push_back({names[i], instances[i]->inst});
    }
    for (const auto& m : split(methods, ',')) cfg.methods.push_back(plsv::parse_method(m));
    cfg.runs = runs;
    cfg.seed = seed;
    if (p) cfg.params = p->params;
    if (bks_path) cfg.bks = plsv::read_bks(bks_path);
    cfg.workers = workers;
    cfg.deterministic = deterministic != 0;
    plsv::write_bench_report(plsv::run_bench(cfg), out_dir);
  });
}

plsv_status plsv_gantt(const plsv_instance* inst, const plsv_schedule* s, const char* format, char** out) {
  return guard([&] {
    need(inst, "instance");
    need(s, "schedule");
    need(format, "format");
    need(out, "out");
    const std::string f = format;
    if (f != "svg" && f != "text")
      throw plsv::Error(plsv::ErrorKind::InvalidArgument, "gantt format must be svg or text, got '" + f + "'");
    const auto layout = plsv::gantt_layout(*inst->inst, s->sched);
    *out = dup(f == "svg" ? plsv::render_svg(layout) : plsv::render_text(layout));
  });
}

plsv_status plsv_export_lp(const plsv_instance* inst, const char* formulation, const plsv_schedule* order,
                           const char* path) {
  return guard([&] {
    need(inst, "instance");
    need(formulation, "formulation");
    need(path, "path");
    const std::string f = formulation;
    plsv::BatchModel model;
    if (f == "wspt") {
      std::optional<plsv::Theta> theta;
      if (order) theta = plsv::Theta::from_schedule(order->sched, inst->inst->num_ops());
      const auto prec = plsv::wspt_order(*inst->inst, theta ? &*theta : nullptr);
      model = plsv::build_model(inst->inst, {plsv::Formulation::Wspt, 0}, &prec);
    } else if (f == "s") {
      model = plsv::build_model(inst->inst, {plsv::Formulation::Sequencing, 0});
    } else {
      throw plsv::Error(plsv::ErrorKind::InvalidArgument, "formulation must be wspt or s, got '" + f + "'");
    }
    plsv::export_model(model, path);
  });
}

}  // extern "C"
