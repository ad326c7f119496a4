#ifndef NCS_H
#define NCS_H

/* C API for the NCS moment-analysis library.
 *
 * All entry points return an ncs_status; on failure the thread-local message
 * from ncs_last_error_message() describes the problem. Output strings are
 * heap-allocated JSON (or CSV for sweeps) and must be released with
 * ncs_string_free. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ncs_status {
  NCS_OK = 0,
  NCS_ERR_DIMENSION = 1,
  NCS_ERR_DOMAIN = 2,
  NCS_ERR_DIVERGENCE = 3,
  NCS_ERR_NONCONVERGENCE = 4,
  NCS_ERR_UNSTABLE = 5,
  NCS_ERR_INFEASIBLE = 6,
  NCS_ERR_INVALID_MODEL = 7,
  NCS_ERR_PARSE = 8,
  NCS_ERR_INTERNAL = 9
} ncs_status;

typedef struct ncs_model ncs_model;

const char* ncs_version(void);

/* Thread-local message for the most recent failing call; never NULL. */
const char* ncs_last_error_message(void);

void ncs_string_free(char* text);

/* Parse a schema_version-1 JSON model config. On success *out owns the
 * model and must be released with ncs_model_free. */
ncs_status ncs_model_parse(const char* json_text, ncs_model** out);
void ncs_model_free(ncs_model* model);

ncs_status ncs_model_validate(const ncs_model* model);

/* Exact stationary moments + stability report as JSON. Pass rel_tol <= 0
 * for the default quadrature tolerance. */
ncs_status ncs_analyze(const ncs_model* model, double rel_tol,
                       char** json_out);

/* Monte Carlo estimate. sim_json may be NULL or a config with an optional
 * "simulation" object. */
ncs_status ncs_simulate(const ncs_model* model, const char* sim_json,
                        char** json_out);

/* Gain synthesis from a full config with a "design" object. */
ncs_status ncs_design(const char* config_json, char** json_out);

/* Parameter sweep from a full config with a "sweep" object; emits CSV. */
ncs_status ncs_sweep(const ncs_model* model, const char* sweep_json,
                     char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* NCS_H */
