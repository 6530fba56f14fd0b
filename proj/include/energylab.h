#ifndef ENERGYLAB_H
#define ENERGYLAB_H

/* C API of the energy-transport laboratory. All entry points return a
 * status code; on failure el_last_error() describes the problem (thread
 * local). Handles are opaque and must be released with the matching free
 * function. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  EL_OK = 0,
  EL_ERR_INVALID = 1,      /* bad arguments or config schema violation */
  EL_ERR_RUNTIME = 2,      /* computation failed */
  EL_ERR_VERIFICATION = 3  /* run completed but a pass-gated check failed */
} el_status;

const char* el_last_error(void);

/* ---- coupling graph ---- */

typedef struct el_graph el_graph;

el_status el_graph_create_complete(int n, el_graph** out);
/* box: per-axis inclusive ranges lo[i]..hi[i], i < dim */
el_status el_graph_create_lattice(int dim, const long* lo, const long* hi, el_graph** out);
/* edges: n_edges pairs of vertex ids, flattened */
el_status el_graph_create_from_edges(size_t n_vertices, const int* edges, size_t n_edges,
                                     el_graph** out);
void el_graph_free(el_graph* g);

el_status el_graph_counts(const el_graph* g, size_t* n_vertices, size_t* n_edges);
/* valid = 1 if the structural invariants hold (no loops, no duplicates,
 * connected), else 0 */
el_status el_graph_validate(const el_graph* g, int* valid);

/* ---- coefficient model ---- */

typedef struct el_model el_model;

el_status el_model_create_analytic(double A, int d, el_model** out);
el_status el_model_create_empirical_csv(const char* gamma_csv_path, int d, el_model** out);
void el_model_free(el_model* m);

el_status el_model_gamma(const el_model* m, double tau, double* out);
el_status el_model_rho(const el_model* m, double a, double b, double* out);
el_status el_model_beta_sq(const el_model* m, double ex, double ey, double* out);
el_status el_model_drift(const el_model* m, double ex, double ey, double* out);

/* ---- low-energy cutoff functions ---- */

typedef enum {
  EL_CUTOFF_PHI = 0,    /* phi(s) */
  EL_CUTOFF_VARPHI = 1, /* varphi(s) */
  EL_CUTOFF_OMEGA = 2,  /* omega(z) */
  EL_CUTOFF_ZETA = 3    /* zeta(z) */
} el_cutoff_fn;

el_status el_cutoff_eval(double delta, el_cutoff_fn which, double arg, double* out);

/* ---- JSON-config-driven runs ----
 *
 * subcommand: simulate-sde | simulate-micro | estimate-gamma |
 * estimate-sigma | verify | compare. Artifacts are written under outdir
 * (pass NULL or "" to skip file output). The JSON report is returned as a
 * newly allocated string; release it with el_string_free. verify/compare
 * return EL_ERR_VERIFICATION when the report carries "pass": false. */
el_status el_run_json(const char* subcommand, const char* config_json, const char* outdir,
                      char** report_json_out);
void el_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ENERGYLAB_H */
