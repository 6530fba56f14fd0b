#include "energylab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>

#include "energylab/coeffs.hpp"
#include "energylab/cutoff.hpp"
#include "energylab/graph.hpp"
#include "energylab/io.hpp"
#include "energylab/runner.hpp"

namespace {

thread_local std::string g_last_error;

el_status fail(el_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
el_status guarded(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    return fail(EL_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(EL_ERR_RUNTIME, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct el_graph {
  elab::InteractionGraph g;
};

struct el_model {
  elab::CoefficientModel m;
};

extern "C" {

const char* el_last_error(void) { return g_last_error.c_str(); }

el_status el_graph_create_complete(int n, el_graph** out) {
  if (!out) return fail(EL_ERR_INVALID, "out pointer is null");
  return guarded([&] {
    *out = new el_graph{elab::build_complete_graph(n)};
    return EL_OK;
  });
}

el_status el_graph_create_lattice(int dim, const long* lo, const long* hi, el_graph** out) {
  if (!out || !lo || !hi) return fail(EL_ERR_INVALID, "null pointer argument");
  return guarded([&] {
    std::vector<elab::AxisRange> box;
    for (int i = 0; i < dim; ++i) box.push_back({lo[i], hi[i]});
    *out = new el_graph{elab::build_lattice_region(dim, box)};
    return EL_OK;
  });
}

el_status el_graph_create_from_edges(size_t n_vertices, const int* edges, size_t n_edges,
                                     el_graph** out) {
  if (!out || (!edges && n_edges > 0)) return fail(EL_ERR_INVALID, "null pointer argument");
  return guarded([&] {
    std::vector<std::array<int, 2>> list;
    for (size_t i = 0; i < n_edges; ++i) list.push_back({edges[2 * i], edges[2 * i + 1]});
    *out = new el_graph{elab::build_from_edges(n_vertices, std::move(list))};
    return EL_OK;
  });
}

void el_graph_free(el_graph* g) { delete g; }

el_status el_graph_counts(const el_graph* g, size_t* n_vertices, size_t* n_edges) {
  if (!g) return fail(EL_ERR_INVALID, "null graph");
  if (n_vertices) *n_vertices = g->g.n_vertices;
  if (n_edges) *n_edges = g->g.n_edges();
  return EL_OK;
}

el_status el_graph_validate(const el_graph* g, int* valid) {
  if (!g || !valid) return fail(EL_ERR_INVALID, "null pointer argument");
  return guarded([&] {
    *valid = elab::validate(g->g).valid ? 1 : 0;
    return EL_OK;
  });
}

el_status el_model_create_analytic(double A, int d, el_model** out) {
  if (!out) return fail(EL_ERR_INVALID, "out pointer is null");
  return guarded([&] {
    *out = new el_model{elab::CoefficientModel::analytic(A, d)};
    return EL_OK;
  });
}

el_status el_model_create_empirical_csv(const char* path, int d, el_model** out) {
  if (!out || !path) return fail(EL_ERR_INVALID, "null pointer argument");
  return guarded([&] {
    *out = new el_model{elab::CoefficientModel::empirical_from_csv(path, d)};
    return EL_OK;
  });
}

void el_model_free(el_model* m) { delete m; }

#define EL_MODEL_EVAL(name, call)                                    \
  el_status name {                                                   \
    if (!m || !out) return fail(EL_ERR_INVALID, "null pointer");     \
    return guarded([&] {                                             \
      *out = call;                                                   \
      return EL_OK;                                                  \
    });                                                              \
  }

EL_MODEL_EVAL(el_model_gamma(const el_model* m, double tau, double* out), m->m.gamma(tau))
EL_MODEL_EVAL(el_model_rho(const el_model* m, double a, double b, double* out), m->m.rho(a, b))
EL_MODEL_EVAL(el_model_beta_sq(const el_model* m, double ex, double ey, double* out),
              m->m.beta_sq(ex, ey))
EL_MODEL_EVAL(el_model_drift(const el_model* m, double ex, double ey, double* out),
              m->m.drift(ex, ey))

#undef EL_MODEL_EVAL

el_status el_cutoff_eval(double delta, el_cutoff_fn which, double arg, double* out) {
  if (!out) return fail(EL_ERR_INVALID, "out pointer is null");
  return guarded([&] {
    elab::CutoffFamily c(delta);
    switch (which) {
      case EL_CUTOFF_PHI: *out = c.phi(arg); break;
      case EL_CUTOFF_VARPHI: *out = c.varphi(arg); break;
      case EL_CUTOFF_OMEGA: *out = c.omega(arg); break;
      case EL_CUTOFF_ZETA: *out = c.zeta(arg); break;
      default: throw std::invalid_argument("unknown cutoff function selector");
    }
    return EL_OK;
  });
}

el_status el_run_json(const char* subcommand, const char* config_json, const char* outdir,
                      char** report_json_out) {
  if (!subcommand || !config_json || !report_json_out)
    return fail(EL_ERR_INVALID, "null pointer argument");
  *report_json_out = nullptr;
  elab::json report;
  el_status st = guarded([&] {
    elab::json config;
    try {
      config = elab::json::parse(config_json);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
      report = elab::runner::run_subcommand(subcommand, config,
                                            outdir ? std::string(outdir) : std::string());
    } catch (const std::runtime_error& e) {
      // schema problems are invalid-argument class errors for the caller
      std::string w = e.what();
      if (w.find("unknown key") != std::string::npos || w.find("required") != std::string::npos ||
          w.find("must be") != std::string::npos)
        throw std::invalid_argument(w);
      throw;
    }
    return EL_OK;
  });
  if (st != EL_OK) return st;
  *report_json_out = dup_string(report.dump(2));
  if (!*report_json_out) return fail(EL_ERR_RUNTIME, "out of memory");
  if (report.contains("pass") && !report["pass"].get<bool>())
    return fail(EL_ERR_VERIFICATION, "one or more pass-gated checks failed");
  return EL_OK;
}

void el_string_free(char* s) { std::free(s); }

}  // extern "C"
