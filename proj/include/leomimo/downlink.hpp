// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <complex>
#include <cstdint>
#include <vector>

#include "leomimo/channel.hpp"
#include "leomimo/clustering.hpp"
#include "leomimo/estimation.hpp"

namespace leomimo {

enum class PrecoderMode { PhaseAware, Asynchronous };
enum class CsiMode { Lmmse, Perfect };

const char* to_string(PrecoderMode m);
const char* to_string(CsiMode m);

struct PilotParams {
  int tau_p = 30;
  int tau_c = 200;
  double prelog() const { return 1.0 - static_cast<double>(tau_p) / tau_c; }
};

/// Maximum-ratio precoder; the phase-aware variant pre-rotates by the delay
/// phase so the per-satellite contributions add coherently at the user.
arma::cx_vec make_precoder(const arma::cx_vec& estimate,
                           std::complex<double> delay_phase, PrecoderMode mode);

/// Per-drop channel state for every (user, satellite) link, independent of
/// the clustering policy. Row-major [user][satellite].
struct LinkSet {
  int num_users = 0;
  int num_sats = 0;
  int num_antennas = 1;
  double rician_k = 0.0;
  std::vector<double> gain;        // linear large-scale gain
  std::vector<arma::cx_vec> los;   // array response per link
  std::vector<arma::cx_mat> cov;   // channel covariance per link

  std::size_t idx(int n, int m) const {
    return static_cast<std::size_t>(n) * num_sats + m;
  }
};

/// One transmission configuration to evaluate: clusters from some
/// (policy, criterion) pair plus the delay phases relative to each user's
/// reference satellite.
struct TxSetup {
  std::vector<ServingCluster> clusters;            // per user
  std::vector<std::complex<double>> delay_phase;   // N*M, 1 where unused
  // explicit power coefficients (N*M); empty means equal-split allocation
  std::vector<double> kappa;
};

/// Equal per-user split of each satellite's power budget, normalized by the
/// expected precoder energy so the budget holds in expectation:
/// kappa[n*M+m] = P_max / (|served(m)| * E||v_nm||^2).
std::vector<double> allocate_power(const std::vector<ServingCluster>& clusters,
                                   const std::vector<double>& precoder_energy,
                                   int num_sats, double max_power_w);

/// Single network-wide coefficient: plain (unnormalized) maximum-ratio
/// weights with the largest kappa for which every satellite still meets its
/// budget, i.e. kappa = P_max / max_m sum_n a_nm E||v_nm||^2. Satellites
/// other than the binding one radiate below P_max.
std::vector<double> uniform_power_coefficient(
    const std::vector<ServingCluster>& clusters,
    const std::vector<double>& precoder_energy, int num_sats,
    double max_power_w);

enum class PowerMode { EqualSplit, UniformCoefficient };
const char* to_string(PowerMode m);

struct UserSe {
  bool covered = false;
  int cluster_size = 0;
  double coherent_gain = 0.0;    // |E{sum_m sqrt(kappa) h^H v}|^2
  double bf_uncertainty = 0.0;   // variance of the same sum
  double interference = 0.0;     // sum over other users of E|...|^2
  double noise_w = 0.0;
  double sinr = 0.0;
  double se = 0.0;               // prelog * log2(1 + sinr)
  double sinr_stderr = 0.0;      // batch-means standard error
  bool low_confidence = false;   // stderr > 10% of the mean
};

struct SetupEvalResult {
  std::vector<UserSe> phase_aware;  // per user
  std::vector<UserSe> asynchronous;
};

/// Monte Carlo evaluation of the per-user SINR/SE expectation terms over
/// small-scale fading and pilot noise. All setups share identical channel
/// draws (paired comparison); draws are keyed by (seed, drop, trial, link)
/// so results are byte-stable regardless of evaluation order.
std::vector<SetupEvalResult> evaluate_sinr_se(
    const LinkSet& links, const std::vector<TxSetup>& setups,
    const RadioConfig& radio, const PilotParams& pilots, CsiMode csi,
    int trials, std::uint64_t seed, std::uint64_t drop_index,
    PowerMode power = PowerMode::EqualSplit);

}  // namespace leomimo
