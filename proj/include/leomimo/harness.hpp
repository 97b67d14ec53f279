// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leomimo/config.hpp"
#include "leomimo/results.hpp"

namespace leomimo {

/// Per-drop world state shared by every policy/criterion under evaluation.
struct DropContext {
  std::vector<Satellite> sats;
  std::vector<GroundUser> users;
  ConstellationSnapshot snapshot;
  std::vector<double> shadow_db;  // N*M, fixed for the drop
  std::vector<double> aoa_rad;    // N*M, fixed for the drop
  LinkSet links;
};

/// Builds constellation, user drop, snapshot and large-scale channel state
/// for one Monte Carlo drop. Deterministic in (config, drop_index).
DropContext make_drop(const ExperimentConfig& cfg, int drop_index);

/// Runs the full experiment: for every drop, forms clusters under each
/// requested policy and criterion, evaluates SINR/SE under each precoder mode
/// with paired channel draws, and (optionally) steps the cluster state
/// machine over time to measure coverage. Deterministic in (config, seed).
ExperimentResult run(const ExperimentConfig& cfg);

}  // namespace leomimo
