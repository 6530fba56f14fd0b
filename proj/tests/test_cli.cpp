#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return ENERGYLAB_CLI_PATH; }

fs::path work_dir() {
  auto d = fs::temp_directory_path() / "elab_cli_tests";
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& body) {
  auto p = work_dir() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

int run(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stdout_file.empty())
    cmd += " > " + stdout_file.string() + " 2> " + stdout_file.string() + ".err";
  else
    cmd += " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::string kSdeConfig =
    R"({"seed": 7, "graph": {"type": "complete", "n": 2},
        "model": {"type": "analytic"}, "initial_energies": [1.0, 1.0],
        "dt": 1e-3, "t_end": 0.02})";

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("") == 1);                         // missing subcommand
  CHECK(run("frobnicate -c x.json") == 1);     // unknown subcommand
  CHECK(run("simulate-sde") == 1);             // missing required --config
  CHECK(run("simulate-sde -c /no/such/config.json") == 1);
}

TEST_CASE("config errors exit with 1") {
  auto bad_json = write_config("bad.json", "{ not json");
  CHECK(run("simulate-sde -c " + bad_json.string()) == 1);
  auto bad_key = write_config("bad_key.json",
                              R"({"seed": 1, "typo": 2, "graph": {"type": "complete", "n": 2},
                                  "model": {}, "initial_energies": [1.0, 1.0]})");
  CHECK(run("simulate-sde -c " + bad_key.string()) == 1);
}

TEST_CASE("successful run prints the report and honors --out") {
  auto cfg = write_config("sde.json", kSdeConfig);
  auto outdir = work_dir() / "run1";
  fs::remove_all(outdir);
  auto cap = work_dir() / "stdout.txt";
  CHECK(run("simulate-sde -c " + cfg.string() + " -o " + outdir.string(), cap) == 0);
  CHECK(fs::exists(outdir / "trajectory.csv"));
  CHECK(fs::exists(outdir / "report.json"));
  CHECK(slurp(cap).find("\"config_digest\"") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns with the same seed") {
  auto cfg = write_config("sde.json", kSdeConfig);
  auto a = work_dir() / "a.txt";
  auto b = work_dir() / "b.txt";
  CHECK(run("simulate-sde -c " + cfg.string(), a) == 0);
  CHECK(run("simulate-sde -c " + cfg.string(), b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  // a different seed changes the result
  auto c = work_dir() / "c.txt";
  CHECK(run("simulate-sde -c " + cfg.string() + " --seed 8", c) == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("quiet flag suppresses stdout") {
  auto cfg = write_config("sde.json", kSdeConfig);
  auto cap = work_dir() / "quiet.txt";
  CHECK(run("simulate-sde -q -c " + cfg.string(), cap) == 0);
  CHECK(slurp(cap).empty());
}

TEST_CASE("verification failure exits with 3") {
  auto cfg = write_config("verify_fail.json",
                          R"({"seed": 3, "checks": ["hitting"], "hitting_ensemble": 20})");
  CHECK(run("verify -c " + cfg.string()) == 3);
}

TEST_CASE("runtime failure exits with 2") {
  auto cfg = write_config("gamma_fail.json",
                          R"({"seed": 2, "tau_grid": [1.0], "ensemble": 64,
                              "max_points": 10, "dt": 0.02, "min_window": 50.0})");
  CHECK(run("estimate-gamma -c " + cfg.string()) == 2);
}

TEST_CASE("fast verification checks pass end to end") {
  auto cfg = write_config("verify_ok.json",
                          R"({"seed": 1, "checks": ["coeffs", "conservation", "drift"]})");
  auto cap = work_dir() / "verify.txt";
  CHECK(run("verify -c " + cfg.string(), cap) == 0);
  CHECK(slurp(cap).find("\"pass\": true") != std::string::npos);
}
