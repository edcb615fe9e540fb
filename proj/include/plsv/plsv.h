#ifndef PLSV_H
#define PLSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PLSV_API __declspec(dllexport)
#else
#define PLSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plsv_status {
  PLSV_OK = 0,
  PLSV_E_INVALID_ARGUMENT = 1,
  PLSV_E_PARSE = 2,
  PLSV_E_INFEASIBLE = 3,
  PLSV_E_IO = 4,
  PLSV_E_LIMIT = 5,
  PLSV_E_INTERNAL = 6
} plsv_status;

typedef struct plsv_instance plsv_instance;
typedef struct plsv_schedule plsv_schedule;
typedef struct plsv_params plsv_params;

/* Message of the last failed call on this thread ("" after success). */
PLSV_API const char* plsv_last_error(void);
/* Stable lower-case category name: ok, invalid_argument, parse, infeasible, io, limit, internal. */
PLSV_API const char* plsv_status_name(plsv_status s);
PLSV_API const char* plsv_version(void);
/* Releases strings returned through char** out parameters. */
PLSV_API void plsv_string_free(char* s);

/* Parameters start at the documented defaults. Keys as in the params file. */
PLSV_API plsv_params* plsv_params_new(void);
PLSV_API void plsv_params_free(plsv_params* p);
PLSV_API plsv_status plsv_params_set(plsv_params* p, const char* key, const char* value);
/* key=value lines, '#' comments. */
PLSV_API plsv_status plsv_params_load_text(plsv_params* p, const char* text);

PLSV_API plsv_status plsv_instance_generate(int num_ops, int num_machines, double release_factor,
                                            double eligibility_factor, double job_assoc_factor, uint64_t seed,
                                            plsv_instance** out);
/* o{ops}_m{machines}_{combo}_{replicate} */
PLSV_API plsv_status plsv_instance_name(int num_ops, int num_machines, double release_factor,
                                        double eligibility_factor, double job_assoc_factor, int replicate,
                                        char** out);
PLSV_API plsv_status plsv_instance_read(const char* path, plsv_instance** out);
PLSV_API plsv_status plsv_instance_write(const plsv_instance* inst, const char* path);
PLSV_API plsv_status plsv_instance_to_json(const plsv_instance* inst, char** out);
PLSV_API plsv_status plsv_instance_size(const plsv_instance* inst, int* ops, int* jobs, int* machines, int* families);
PLSV_API void plsv_instance_free(plsv_instance* inst);

PLSV_API plsv_status plsv_schedule_read(const plsv_instance* inst, const char* path, plsv_schedule** out);
PLSV_API plsv_status plsv_schedule_write(const plsv_schedule* s, const char* path);
PLSV_API plsv_status plsv_schedule_to_json(const plsv_schedule* s, char** out);
PLSV_API void plsv_schedule_free(plsv_schedule* s);

/* TWCT of a feasible schedule; PLSV_E_INFEASIBLE with the violation list otherwise. */
PLSV_API plsv_status plsv_evaluate(const plsv_instance* inst, const plsv_schedule* s, int64_t* twct);
/* Human-readable report: job completion times, TWCT, makespan. */
PLSV_API plsv_status plsv_evaluate_report(const plsv_instance* inst, const plsv_schedule* s, char** out);

/* method: "wmct", or "ils1".."ils3", "grasp1".."grasp3". log_csv (optional) receives
   the run events as CSV: seconds,nodes,twct,best,phase,formulation. */
PLSV_API plsv_status plsv_solve(const plsv_instance* inst, const char* method, const plsv_params* p, uint64_t seed,
                                plsv_schedule** out, int64_t* twct, char** log_csv);

/* Runs every (instance, method, run) combination and writes runs.csv,
   aggregate.csv and evolution.csv into out_dir. methods is comma separated.
   bks_path may be NULL. deterministic != 0 bounds sub-solves by nodes. */
PLSV_API plsv_status plsv_bench(const plsv_instance* const* instances, const char* const* names, size_t count,
                                const char* methods, int runs, uint64_t seed, const plsv_params* p,
                                const char* bks_path, const char* out_dir, int workers, int deterministic);

/* format: "svg" or "text" */
PLSV_API plsv_status plsv_gantt(const plsv_instance* inst, const plsv_schedule* s, const char* format, char** out);

/* formulation: "wspt" or "s". For "wspt" the precedence sets follow the optional
   schedule (pairs sharing one of its batches keep their order), then the WSPT rule. */
PLSV_API plsv_status plsv_export_lp(const plsv_instance* inst, const char* formulation, const plsv_schedule* order,
                                    const char* path);

#ifdef __cplusplus
}
#endif

#endif
