#ifndef STABCERT_H
#define STABCERT_H

#include <stddef.h>

#if defined(STABCERT_BUILDING)
#define STABCERT_API __attribute__((visibility("default")))
#else
#define STABCERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stabcert_status {
  STABCERT_OK = 0,
  STABCERT_INVALID_ARGUMENT = 1,
  STABCERT_PARSE = 2,
  STABCERT_VALIDATION = 3,
  STABCERT_DOMAIN = 4,
  STABCERT_INFEASIBLE = 5,
  STABCERT_INTERNAL = 6,
  STABCERT_IO = 7,
  STABCERT_SIMULATION = 8
} stabcert_status;

typedef struct stabcert_spec stabcert_spec;
typedef struct stabcert_trajectory stabcert_trajectory;

/* Message of the last failed call on this thread; "" after success. */
STABCERT_API const char* stabcert_last_error(void);
STABCERT_API const char* stabcert_status_name(stabcert_status status);
STABCERT_API const char* stabcert_version(void);

/* Strings returned through char** are owned by the caller. */
STABCERT_API void stabcert_string_free(char* s);

STABCERT_API stabcert_status stabcert_spec_from_json(const char* json, stabcert_spec** out);
STABCERT_API void stabcert_spec_free(stabcert_spec* spec);
STABCERT_API size_t stabcert_spec_dim(const stabcert_spec* spec);
STABCERT_API stabcert_status stabcert_spec_digest(const stabcert_spec* spec, char** out);

/* p_values may be NULL (defaults 2 and 3). periods <= 0 disables the
 * simulation cross-check. Writes the report envelope; *certified is 1 when
 * some criterion holds at rate 0. */
STABCERT_API stabcert_status stabcert_analyze(const stabcert_spec* spec, const double* p_values,
                                              size_t n_p, int periods, char** report_json,
                                              int* certified);

/* Returns STABCERT_INFEASIBLE (with the report still written) when the
 * certificate does not hold. */
STABCERT_API stabcert_status stabcert_verify(const stabcert_spec* spec, const char* certificate_json,
                                             char** report_json);

/* from/to are "l1" or "lp"; certificate_json may be NULL for l1 -> lp. */
STABCERT_API stabcert_status stabcert_transform(const stabcert_spec* spec, const char* from, const char* to,
                                                double p, const char* certificate_json, char** report_json);

/* periods <= 0 picks the largest J that fits the horizon. */
STABCERT_API stabcert_status stabcert_simulate(const stabcert_spec* spec, const char* history_json,
                                               double t_end, double h, int periods,
                                               stabcert_trajectory** out);
STABCERT_API void stabcert_trajectory_free(stabcert_trajectory* traj);
STABCERT_API size_t stabcert_trajectory_size(const stabcert_trajectory* traj);
/* Copies the state at grid index k (dim values) into out. */
STABCERT_API stabcert_status stabcert_trajectory_state(const stabcert_trajectory* traj, size_t k, double* t,
                                                       double* out, size_t dim);
STABCERT_API stabcert_status stabcert_trajectory_write_csv(const stabcert_trajectory* traj, const char* path);
STABCERT_API stabcert_status stabcert_trajectory_report(const stabcert_trajectory* traj, char** report_json);

STABCERT_API stabcert_status stabcert_repro_example1(char** report_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
