// Command-line front end. Links only the C API; the JSON header is used
// purely for config handling on the client side.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "energylab.h"

namespace {

constexpr const char* kSubcommands[] = {"simulate-sde", "simulate-micro", "estimate-gamma",
                                        "estimate-sigma", "verify", "compare"};

int run_one(const std::string& name, const std::string& config_path, const std::string& outdir,
            bool has_seed_override, unsigned long long seed_override, bool quiet) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 1;
  }
  nlohmann::ordered_json config;
  try {
    in >> config;
  } catch (const std::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return 1;
  }
  if (has_seed_override) config["seed"] = seed_override;

  char* report = nullptr;
  el_status st = el_run_json(name.c_str(), config.dump().c_str(),
                             outdir.empty() ? nullptr : outdir.c_str(), &report);
  if (report) {
    if (!quiet) std::cout << report << "\n";
    el_string_free(report);
  }
  switch (st) {
    case EL_OK:
      return 0;
    case EL_ERR_INVALID:
      std::cerr << "config error: " << el_last_error() << "\n";
      return 1;
    case EL_ERR_VERIFICATION:
      std::cerr << "verification failed: " << el_last_error() << "\n";
      return 3;
    case EL_ERR_RUNTIME:
    default:
      std::cerr << "runtime error: " << el_last_error() << "\n";
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "energylab: two-level laboratory for energy transport in weakly coupled "
      "chaotic systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir;
  unsigned long long seed_override = 0;
  bool quiet = false;

  const char* env_out = std::getenv("ENERGYLAB_OUT");
  std::string default_out = env_out ? env_out : "";
  std::string chosen;

  for (const char* name : kSubcommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "path to the JSON config")->required();
    sub->add_option("-o,--out", outdir,
                    "output directory (default: $ENERGYLAB_OUT, or no file output)");
    sub->add_option("--seed", seed_override, "override the seed in the config");
    sub->add_flag("-q,--quiet", quiet, "suppress the report on stdout");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (outdir.empty()) outdir = default_out;
  bool has_seed = false;
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed") > 0) has_seed = true;

  return run_one(chosen, config_path, outdir, has_seed, seed_override, quiet);
}
