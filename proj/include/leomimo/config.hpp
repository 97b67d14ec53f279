// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leomimo/channel.hpp"
#include "leomimo/constellation.hpp"
#include "leomimo/downlink.hpp"

namespace leomimo {

struct PolicyConfig {
  std::vector<ClusterPolicy> cluster_policies = {ClusterPolicy::UserCentric};
  std::vector<RsapCriterion> rsap_criteria = {RsapCriterion::BestChannel};
  std::vector<PrecoderMode> precoder_modes = {PrecoderMode::PhaseAware};
  CsiMode csi = CsiMode::Lmmse;
  PowerMode power = PowerMode::EqualSplit;
};

struct MonteCarloConfig {
  int num_drops = 1;
  int trials_per_drop = 100;
  double epoch_step_s = 30.0;
  double horizon_s = 3600.0;
  std::uint64_t seed = 0;  // required in files; no entropy default
  bool measure_coverage = false;
};

struct OutputConfig {
  std::string directory = "results";
  std::vector<std::string> formats = {"csv", "jsonl"};
};

struct ExperimentConfig {
  GeometryConfig geometry;
  RadioConfig radio;
  PilotParams pilot;
  PolicyConfig policy;
  MonteCarloConfig monte_carlo;
  OutputConfig output;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, std::vector<std::string> fields)
      : std::runtime_error(std::move(message)), fields(std::move(fields)) {}
  std::vector<std::string> fields;
};

/// Parses and validates; rejects unknown keys and reports every offending
/// field in one ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

/// Fully normalized round-trippable echo: every parameter explicit.
nlohmann::json config_echo(const ExperimentConfig& cfg);

}  // namespace leomimo
