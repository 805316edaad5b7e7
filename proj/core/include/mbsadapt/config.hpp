#pragma once

// Flat key-value configuration files.
//
//   # comment
//   capacity_kbps = 20000
//   mbs.layer_kbps = 125, 125, 125, 125
//   arrival.ratio = 5:1:4
//   sweep.schemes = proposed, fixed:6000, fixed:14000
//
// Every omitted key takes its reference-cell default; unknown or repeated
// keys are errors. See README.md for the full key list.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mbsadapt/model.hpp"
#include "mbsadapt/traffic.hpp"

namespace mbsadapt {

const char* version();

std::vector<double> default_lambda_values();

struct SweepSpec {
  std::vector<double> lambda_values = default_lambda_values();
  std::vector<Scheme> schemes = {Scheme::proposed(), Scheme::fixed_mbs(6_mbps),
                                 Scheme::fixed_mbs(14_mbps)};
  int replications = 10;
  std::uint64_t seed_base = 1;
  double horizon_s = 2.0e5;
  double warmup_s = 2.0e4;
  unsigned threads = 0;  // 0: hardware concurrency

  // lambda_values non-empty, strictly increasing and > 0; replications >= 1.
  void validate() const;
};

struct LoadedConfig {
  SchemeConfig cell;
  TrafficRates rates;
  SweepSpec sweep;
};

// Throws ConfigError (message starts with the key path) on unknown keys,
// malformed or non-integral kbps values, and violated invariants.
LoadedConfig parse_config(std::string_view text);
LoadedConfig load_config(const std::filesystem::path& path);

// "proposed" or "fixed:<kbps>".
Scheme parse_scheme(std::string_view text);
// Comma-separated arrival rates.
std::vector<double> parse_lambda_list(std::string_view text);

// Canonical key = value text of the cell and traffic keys; parse_config()
// reads it back to an equal configuration.
std::string to_config_text(const SchemeConfig& cell, const TrafficRates& rates);
// Same plus the simulation and sweep keys.
std::string to_config_text(const LoadedConfig& config);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace mbsadapt
