#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "energylab.h"

namespace {

std::string run_ok(const char* sub, const std::string& config) {
  char* report = nullptr;
  el_status st = el_run_json(sub, config.c_str(), nullptr, &report);
  REQUIRE(st == EL_OK);
  REQUIRE(report != nullptr);
  std::string out = report;
  el_string_free(report);
  return out;
}

}  // namespace

TEST_CASE("graph lifecycle through the C API") {
  el_graph* g = nullptr;
  REQUIRE(el_graph_create_complete(4, &g) == EL_OK);
  size_t nv = 0, ne = 0;
  CHECK(el_graph_counts(g, &nv, &ne) == EL_OK);
  CHECK(nv == 4);
  CHECK(ne == 6);
  int valid = 0;
  CHECK(el_graph_validate(g, &valid) == EL_OK);
  CHECK(valid == 1);
  el_graph_free(g);

  el_graph* bad = nullptr;
  CHECK(el_graph_create_complete(1, &bad) == EL_ERR_INVALID);
  CHECK(std::strlen(el_last_error()) > 0);

  long lo[2] = {0, 0}, hi[2] = {2, 2};
  el_graph* lat = nullptr;
  REQUIRE(el_graph_create_lattice(2, lo, hi, &lat) == EL_OK);
  CHECK(el_graph_counts(lat, &nv, &ne) == EL_OK);
  CHECK(nv == 9);
  CHECK(ne == 12);
  el_graph_free(lat);

  int edges[4] = {0, 1, 1, 2};
  el_graph* fe = nullptr;
  REQUIRE(el_graph_create_from_edges(3, edges, 2, &fe) == EL_OK);
  el_graph_free(fe);
  int loop[2] = {0, 0};
  el_graph* bad2 = nullptr;
  CHECK(el_graph_create_from_edges(3, loop, 1, &bad2) == EL_ERR_INVALID);
}

TEST_CASE("model evaluation through the C API") {
  el_model* m = nullptr;
  REQUIRE(el_model_create_analytic(1.0, 3, &m) == EL_OK);
  double v = 0.0;
  CHECK(el_model_gamma(m, 1.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(el_model_rho(m, 1.0, 1.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(el_model_beta_sq(m, 1.0, 1.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.353553390593274).epsilon(1e-12));
  CHECK(el_model_drift(m, 1.0, 1.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  // domain errors surface as runtime status, not crashes
  CHECK(el_model_rho(m, -1.0, 1.0, &v) != EL_OK);
  el_model_free(m);

  el_model* bad = nullptr;
  CHECK(el_model_create_analytic(-1.0, 3, &bad) == EL_ERR_INVALID);
  CHECK(el_model_create_empirical_csv("/no/such/file.csv", 3, &bad) != EL_OK);
}

TEST_CASE("cutoff evaluation through the C API") {
  double v = 0.0;
  REQUIRE(el_cutoff_eval(0.01, EL_CUTOFF_PHI, 0.5, &v) == EL_OK);
  CHECK(v == doctest::Approx(1.0));
  REQUIRE(el_cutoff_eval(0.01, EL_CUTOFF_PHI, 0.01 / 8.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(std::sqrt(1.0 / 8.0)).epsilon(1e-10));
  REQUIRE(el_cutoff_eval(0.01, EL_CUTOFF_VARPHI, 0.5, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(el_cutoff_eval(0.01, EL_CUTOFF_ZETA, 0.0, &v) == EL_OK);
  CHECK(v == doctest::Approx(0.0));
  CHECK(el_cutoff_eval(2.0, EL_CUTOFF_PHI, 0.5, &v) == EL_ERR_INVALID);
  CHECK(el_cutoff_eval(0.01, static_cast<el_cutoff_fn>(99), 0.5, &v) == EL_ERR_INVALID);
}

TEST_CASE("el_run_json status mapping") {
  const char* sde =
      R"({"seed": 7, "graph": {"type": "complete", "n": 2},
          "model": {"type": "analytic"}, "initial_energies": [1.0, 1.0],
          "dt": 1e-3, "t_end": 0.02})";

  SUBCASE("success and determinism") {
    auto a = run_ok("simulate-sde", sde);
    auto b = run_ok("simulate-sde", sde);
    CHECK(a == b);
    CHECK(a.find("\"config_digest\"") != std::string::npos);
  }

  SUBCASE("invalid inputs") {
    char* report = nullptr;
    CHECK(el_run_json("simulate-sde", "{not json", nullptr, &report) == EL_ERR_INVALID);
    CHECK(report == nullptr);
    CHECK(el_run_json("bogus-subcommand", "{}", nullptr, &report) == EL_ERR_INVALID);
    std::string cfg = sde;
    cfg.insert(1, "\"typo\": 1, ");
    CHECK(el_run_json("simulate-sde", cfg.c_str(), nullptr, &report) == EL_ERR_INVALID);
    CHECK(std::string(el_last_error()).find("typo") != std::string::npos);
    CHECK(el_run_json(nullptr, "{}", nullptr, &report) == EL_ERR_INVALID);
  }

  SUBCASE("verification failure is a distinct status") {
    // an ensemble far too small to separate the hitting endpoints
    const char* cfg =
        R"({"seed": 3, "checks": ["hitting"], "hitting_ensemble": 20})";
    char* report = nullptr;
    el_status st = el_run_json("verify", cfg, nullptr, &report);
    CHECK(st == EL_ERR_VERIFICATION);
    REQUIRE(report != nullptr);  // the report is still produced
    CHECK(std::string(report).find("\"pass\": false") != std::string::npos);
    el_string_free(report);
  }

  SUBCASE("runtime failure is a distinct status") {
    // window cap too tight for the correlation to decay
    const char* cfg =
        R"({"seed": 2, "tau_grid": [1.0], "ensemble": 64, "max_points": 10,
            "dt": 0.02, "min_window": 50.0})";
    char* report = nullptr;
    CHECK(el_run_json("estimate-gamma", cfg, nullptr, &report) == EL_ERR_RUNTIME);
    CHECK(report == nullptr);
  }
}
