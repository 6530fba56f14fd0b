#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "energylab/io.hpp"
#include "energylab/runner.hpp"

using namespace elab;
namespace fs = std::filesystem;

namespace {

json sde_config() {
  json c;
  c["seed"] = 42;
  c["graph"] = {{"type", "complete"}, {"n", 2}};
  c["model"] = {{"type", "analytic"}, {"A", 1.0}, {"d", 3}};
  c["initial_energies"] = {1.0, 1.0};
  c["dt"] = 1e-3;
  c["t_end"] = 0.05;
  return c;
}

}  // namespace

TEST_CASE("config digest is stable and content-sensitive") {
  auto c = sde_config();
  auto d1 = config_digest(c);
  auto d2 = config_digest(c);
  CHECK(d1 == d2);
  CHECK_FALSE(d1.empty());
  c["seed"] = 43;
  CHECK(config_digest(c) != d1);
}

TEST_CASE("unknown keys are rejected everywhere") {
  auto c = sde_config();
  c["typo_key"] = 1;
  CHECK_THROWS(runner::simulate_sde(c, ""));
  auto c2 = sde_config();
  c2["graph"]["bogus"] = 1;
  CHECK_THROWS(runner::simulate_sde(c2, ""));
  auto c3 = sde_config();
  c3["model"]["B"] = 2.0;
  CHECK_THROWS(runner::simulate_sde(c3, ""));
}

TEST_CASE("schema errors carry useful messages") {
  auto no_seed = sde_config();
  no_seed.erase("seed");
  CHECK_THROWS_WITH_AS(runner::simulate_sde(no_seed, ""),
                       doctest::Contains("seed"), std::runtime_error);
  auto bad_e = sde_config();
  bad_e["initial_energies"] = {1.0, -1.0};
  CHECK_THROWS_WITH_AS(runner::simulate_sde(bad_e, ""),
                       doctest::Contains("initial_energies"), std::runtime_error);
  auto bad_coords = sde_config();
  bad_coords["coords"] = "polar";
  CHECK_THROWS(runner::simulate_sde(bad_coords, ""));
}

TEST_CASE("sde subcommand is deterministic and writes its artifacts") {
  auto c = sde_config();
  auto r1 = runner::simulate_sde(c, "");
  auto r2 = runner::simulate_sde(c, "");
  CHECK(r1.dump() == r2.dump());
  CHECK(r1["seed"] == 42);
  CHECK(r1["config_digest"] == config_digest(c));
  CHECK(r1["n_samples"].get<std::size_t>() > 10);
  CHECK_FALSE(r1["stopped"].get<bool>());

  auto dir = fs::temp_directory_path() / "elab_runner_sde";
  fs::remove_all(dir);
  auto r3 = runner::simulate_sde(c, dir.string());
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "report.json"));
  // header contract of the time-series file
  std::ifstream in(dir / "trajectory.csv");
  std::string line1, line2, line3;
  std::getline(in, line1);
  std::getline(in, line2);
  std::getline(in, line3);
  CHECK(line1.find("# seed=") == 0);
  CHECK(line2.find("# config_digest=") == 0);
  CHECK(line3 == "t,E_0,E_1");
  auto saved = read_json_file((dir / "report.json").string());
  CHECK(saved["config_digest"] == r3["config_digest"]);
  fs::remove_all(dir);
}

TEST_CASE("log-coordinate run through the runner") {
  auto c = sde_config();
  c["coords"] = "log";
  c["delta"] = 0.01;
  auto r = runner::simulate_sde(c, "");
  CHECK(r["min_energy_seen"].get<double>() > 0.0);
}

TEST_CASE("micro subcommand round trip") {
  json c;
  c["seed"] = 9;
  c["graph"] = {{"type", "complete"}, {"n", 2}};
  c["epsilon"] = 0.2;
  c["delta"] = 0.01;
  c["initial_energies"] = {1.0, 0.5};
  c["h"] = 1e-3;
  c["t_slow_end"] = 0.01;
  c["record_samples"] = 2;
  auto r = runner::simulate_micro(c, "");
  CHECK(r["hamiltonian_drift"].get<double>() <= 1e-6);
  c["epsilon"] = -1.0;
  CHECK_THROWS(runner::simulate_micro(c, ""));
}

TEST_CASE("sigma subcommand with oracle") {
  json c;
  c["seed"] = 5;
  c["observable"] = "cos1";
  c["ensemble"] = 5000;
  c["lag_max"] = 30;
  c["oracle_N"] = 20000;
  c["oracle_ensemble"] = 200;
  auto r = runner::estimate_sigma(c, "");
  CHECK(r["sigma_sq"].get<double>() == doctest::Approx(0.5).epsilon(0.15));
  CHECK(r["oracle_sigma_sq"].get<double>() == doctest::Approx(0.5).epsilon(0.2));
  c["observable"] = "unknown";
  CHECK_THROWS(runner::estimate_sigma(c, ""));
}

TEST_CASE("verify subcommand runs selected fast checks") {
  json c;
  c["seed"] = 1;
  c["checks"] = {"coeffs", "conservation", "drift"};
  auto r = runner::verify(c, "");
  CHECK(r["pass"].get<bool>());
  REQUIRE(r["checks"].size() == 3);
  for (const auto& chk : r["checks"]) CHECK(chk["pass"].get<bool>());
  c["checks"] = {"nonsense"};
  CHECK_THROWS(runner::verify(c, ""));
}

TEST_CASE("compare validates its ladder") {
  json c;
  c["seed"] = 1;
  c["epsilon_ladder"] = {0.1, 0.2};
  c["initial_energies"] = {1.0, 1.0};
  CHECK_THROWS(runner::compare(c, ""));
  c["epsilon_ladder"] = {0.2};
  CHECK_THROWS(runner::compare(c, ""));
}

TEST_CASE("subcommand dispatch") {
  CHECK_THROWS_AS(runner::run_subcommand("bogus", json::object(), ""), std::invalid_argument);
  auto r = runner::run_subcommand("simulate-sde", sde_config(), "");
  CHECK(r["seed"] == 42);
}
