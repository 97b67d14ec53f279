// SPDX-License-Identifier: Apache-2.0
#include "leomimo/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace leomimo {

arma::cx_mat receive_pilots(int num_antennas, const std::vector<PilotTx>& txs,
                            const PilotBook& book, double noise_power_w,
                            Rng& rng) {
  arma::cx_mat received(num_antennas, book.tau_p(), arma::fill::zeros);
  for (const auto& tx : txs) {
    if (!tx.served) continue;
    if (static_cast<int>(tx.effective_channel.n_elem) != num_antennas)
      throw std::invalid_argument("channel length != antenna count");
    const arma::cx_vec seq = book.sequence(tx.pilot_index);
    received += std::sqrt(tx.power_w) * tx.effective_channel * seq.st();
  }
  if (noise_power_w > 0.0) {
    const double scale = std::sqrt(noise_power_w);
    for (arma::uword c = 0; c < received.n_cols; ++c)
      for (arma::uword r = 0; r < received.n_rows; ++r)
        received(r, c) += scale * rng.cgaussian();
  }
  return received;
}

arma::cx_vec despread(const arma::cx_mat& received, const arma::cx_vec& sequence) {
  if (received.n_cols != sequence.n_elem)
    throw std::invalid_argument("sequence length != pilot block width");
  return received * arma::conj(sequence) /
         std::sqrt(static_cast<double>(sequence.n_elem));
}

LmmseFilter make_lmmse_filter(const arma::cx_mat& covariance,
                              std::complex<double> delay_phase, double power_w,
                              bool served,
                              const std::vector<CopilotStat>& copilots,
                              int tau_p, double noise_power_w) {
  const arma::uword L = covariance.n_rows;
  const double tp = static_cast<double>(tau_p);

  arma::cx_mat psi = tp * power_w * (served ? 1.0 : 0.0) * covariance;
  for (const auto& cp : copilots) {
    if (!cp.served) continue;
    if (cp.covariance.n_rows != L)
      throw std::invalid_argument("co-pilot covariance dimension mismatch");
    psi += tp * cp.power_w * cp.covariance;
  }
  psi.diag() += noise_power_w;

  arma::cx_mat psi_inv;
  if (!arma::inv_sympd(psi_inv, psi) && !arma::inv(psi_inv, psi))
    throw std::runtime_error("pilot interference covariance is singular");

  LmmseFilter f;
  const double c = std::sqrt(tp * power_w * (served ? 1.0 : 0.0));
  f.weight = c * std::conj(delay_phase) * covariance * psi_inv;
  const arma::cx_mat rpr = covariance * psi_inv * covariance;
  f.error_cov = covariance - (c * c) * rpr;
  f.estimate_energy = (c * c) * arma::trace(rpr).real();
  return f;
}

arma::cx_vec lmmse_estimate(const arma::cx_vec& observation,
                            const arma::cx_mat& covariance,
                            std::complex<double> delay_phase, double power_w,
                            bool served,
                            const std::vector<CopilotStat>& copilots,
                            int tau_p, double noise_power_w) {
  const LmmseFilter f = make_lmmse_filter(covariance, delay_phase, power_w,
                                          served, copilots, tau_p,
                                          noise_power_w);
  return lmmse_estimate(f, observation);
}

}  // namespace leomimo
