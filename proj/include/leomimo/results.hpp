// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "leomimo/clustering.hpp"
#include "leomimo/downlink.hpp"

namespace leomimo {

struct SeRecord {
  int drop = 0;
  int user = 0;
  ClusterPolicy policy = ClusterPolicy::UserCentric;
  RsapCriterion criterion = RsapCriterion::BestChannel;
  PrecoderMode mode = PrecoderMode::PhaseAware;
  double sinr = 0.0;
  double se = 0.0;
  int cluster_size = 0;
  double coherent_gain = 0.0;
  double bf_uncertainty = 0.0;
  double interference = 0.0;
  double noise_w = 0.0;
  double sinr_stderr = 0.0;
  bool low_confidence = false;
};

struct CoverageRecord {
  int drop = 0;
  int user = 0;
  RsapCriterion criterion = RsapCriterion::BestChannel;
  bool covered = false;
  double coverage_s = 0.0;
  double formation_service_s = 0.0;
};

struct ClusterSizeRecord {
  int drop = 0;
  double time_s = 0.0;
  int user = 0;
  RsapCriterion criterion = RsapCriterion::BestChannel;
  int size = 0;
};

struct EventRecord {
  int drop = 0;
  ClusterPolicy policy = ClusterPolicy::UserCentric;
  RsapCriterion criterion = RsapCriterion::BestChannel;
  ClusterEvent event;
};

struct ExperimentResult {
  nlohmann::json config;  // normalized echo of the config that produced this
  std::vector<SeRecord> se_records;
  std::vector<CoverageRecord> coverage_records;
  std::vector<ClusterSizeRecord> size_records;
  std::vector<EventRecord> events;
};

/// Right-continuous empirical CDF on an evenly spaced grid over [min, max].
/// Throws on empty samples. Constant samples give a single-step CDF at 1.
std::vector<std::pair<double, double>> summarize_cdf(
    std::vector<double> samples, int grid_points);

/// Writes manifest.json, se_samples.csv, coverage_times.csv,
/// cluster_sizes.csv, events.jsonl and summary.csv into the directory
/// (created if needed). Output is byte-stable for identical results.
void write_result(const ExperimentResult& result, const std::string& dir);

/// Reads back the records written by write_result.
std::vector<SeRecord> read_se_records(const std::string& dir);
std::vector<CoverageRecord> read_coverage_records(const std::string& dir);
nlohmann::json read_manifest(const std::string& dir);

std::string format_double(double v);

}  // namespace leomimo
