#pragma once

#include <string>

#include "energylab/io.hpp"

namespace elab::runner {

// JSON-config-driven entry points shared by the C API and the CLI. Each
// validates its config (unknown keys rejected, ranges checked), runs the
// computation, writes artifacts into `outdir` (skipped when empty) and
// returns the report object. Errors are thrown as std::exception.
json simulate_sde(const json& config, const std::string& outdir);
json simulate_micro(const json& config, const std::string& outdir);
json estimate_gamma(const json& config, const std::string& outdir);
json estimate_sigma(const json& config, const std::string& outdir);
json verify(const json& config, const std::string& outdir);
json compare(const json& config, const std::string& outdir);

// Dispatch by subcommand name; throws std::invalid_argument for an unknown
// name.
json run_subcommand(const std::string& name, const json& config, const std::string& outdir);

// Individual verification checks, exposed for the acceptance suite. Each
// returns {"name":..., "pass": bool, ...}.
json check_coefficient_identities(std::uint64_t seed);
json check_conservation(std::uint64_t seed);
json check_drift_identity();
json check_invariant_marginal(std::uint64_t seed, bool with_calibration);
json check_reversibility(std::uint64_t seed, std::size_t n_samples);
json check_hitting_trend(std::uint64_t seed, std::size_t ensemble);
json check_sigma_consistency(std::uint64_t seed);
json check_micro_gauges(std::uint64_t seed);

}  // namespace elab::runner
