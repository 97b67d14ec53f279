// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <complex>
#include <vector>

#include "leomimo/pilots.hpp"
#include "leomimo/rng.hpp"

namespace leomimo {

/// One user's uplink pilot transmission as seen by a satellite.
struct PilotTx {
  int pilot_index = 0;
  double power_w = 1.0;
  bool served = true;             // membership indicator at this satellite
  arma::cx_vec effective_channel; // delay phase already applied
};

/// Received pilot block at one satellite: sum of served users' effective
/// channels times their pilot rows, plus i.i.d. CN(0, noise_power) entries.
arma::cx_mat receive_pilots(int num_antennas, const std::vector<PilotTx>& txs,
                            const PilotBook& book, double noise_power_w,
                            Rng& rng);

/// Pilot-matched projection Y * conj(seq) / sqrt(tau_p); users on orthogonal
/// pilots vanish exactly.
arma::cx_vec despread(const arma::cx_mat& received, const arma::cx_vec& sequence);

/// Second-order statistics of one co-pilot interferer at this satellite.
struct CopilotStat {
  arma::cx_mat covariance;
  double power_w = 1.0;
  bool served = true;
};

/// LMMSE weights for estimating the phase-free channel from the despread
/// observation, precomputed from channel statistics only.
struct LmmseFilter {
  arma::cx_mat weight;        // estimate = weight * observation
  arma::cx_mat error_cov;     // covariance of (h - estimate)
  double estimate_energy = 0; // E[||estimate||^2]
};

/// Builds the estimator for a (user, satellite) link. `copilots` lists the
/// other users in the co-pilot set with their covariances at this satellite;
/// the interference covariance is tau_p * sum(p_j a_j R_j) + noise * I.
LmmseFilter make_lmmse_filter(const arma::cx_mat& covariance,
                              std::complex<double> delay_phase, double power_w,
                              bool served, const std::vector<CopilotStat>& copilots,
                              int tau_p, double noise_power_w);

inline arma::cx_vec lmmse_estimate(const LmmseFilter& f,
                                   const arma::cx_vec& observation) {
  return f.weight * observation;
}

/// One-shot form used by the tests and by callers that do not reuse weights.
arma::cx_vec lmmse_estimate(const arma::cx_vec& observation,
                            const arma::cx_mat& covariance,
                            std::complex<double> delay_phase, double power_w,
                            bool served, const std::vector<CopilotStat>& copilots,
                            int tau_p, double noise_power_w);

}  // namespace leomimo
