// SPDX-License-Identifier: Apache-2.0
#include "leomimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace leomimo {

double free_space_path_loss_db(double f_mhz, double r_km) {
  if (f_mhz <= 0.0) throw std::invalid_argument("frequency must be positive");
  if (r_km <= 0.0) throw std::invalid_argument("range must be positive");
  return 32.45 + 20.0 * std::log10(f_mhz) + 20.0 * std::log10(r_km);
}

double antenna_loss_linear(double boresight_rad, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("aperture radius must be positive");
  const double x = 2.0 * std::numbers::pi * eta * std::sin(boresight_rad);
  if (x == 0.0) return 1.0;  // J1(x)/x -> 1/2 on axis
  const double j1 = std::cyl_bessel_j(1.0, std::abs(x));
  if (j1 == 0.0) return kAntennaLossCapLinear;
  const double ratio = x / j1;
  const double loss = 0.25 * ratio * ratio;
  return std::min(loss, kAntennaLossCapLinear);
}

double sample_shadowing_db(Rng& rng, double var_db2) {
  if (var_db2 < 0.0) throw std::invalid_argument("shadowing variance < 0");
  if (var_db2 == 0.0) return 0.0;
  return std::sqrt(var_db2) * rng.gaussian();
}

LargeScale large_scale(double range_m, double boresight_rad,
                       const RadioConfig& cfg, double shadow_db) {
  LargeScale ls;
  ls.fspl_db = free_space_path_loss_db(cfg.frequency_mhz, range_m / 1000.0);
  ls.shadow_db = shadow_db;
  ls.ant_loss_db = 10.0 * std::log10(antenna_loss_linear(
                              boresight_rad, cfg.antenna_aperture_wavelengths));
  ls.other_db = cfg.other_losses_db;
  const double gain_db = cfg.sat_gain_dbi + cfg.user_gain_db - ls.fspl_db -
                         ls.shadow_db - ls.ant_loss_db - ls.other_db;
  ls.gain = std::pow(10.0, gain_db / 10.0);
  return ls;
}

arma::cx_vec los_steering(double aoa_rad, int num_antennas, double spacing_wl) {
  if (num_antennas < 1) throw std::invalid_argument("need >= 1 antenna");
  arma::cx_vec v(num_antennas);
  const double step = -2.0 * std::numbers::pi * spacing_wl * std::sin(aoa_rad);
  for (int l = 0; l < num_antennas; ++l)
    v[l] = std::polar(1.0, step * static_cast<double>(l));
  return v;
}

arma::cx_vec sample_small_scale(const arma::cx_vec& los, double rician_k,
                                Rng& rng) {
  if (rician_k < 0.0) throw std::invalid_argument("Rician K-factor < 0");
  const double k = std::min(rician_k, 1e12);
  const double w_los = std::sqrt(k / (1.0 + k));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k));
  arma::cx_vec g(los.n_elem);
  for (arma::uword l = 0; l < los.n_elem; ++l)
    g[l] = w_los * los[l] + w_nlos * rng.cgaussian();
  return g;
}

std::complex<double> phase_shift(double dt_s, double symbol_duration_s) {
  if (symbol_duration_s <= 0.0)
    throw std::invalid_argument("symbol duration must be positive");
  return std::polar(1.0, -2.0 * std::numbers::pi * dt_s / symbol_duration_s);
}

arma::cx_mat correlation_matrix(double gain, double rician_k,
                                const arma::cx_vec& los) {
  const double k = std::min(std::max(rician_k, 0.0), 1e12);
  const double w_los = k / (1.0 + k);
  const double w_nlos = 1.0 / (1.0 + k);
  arma::cx_mat R = w_los * (los * los.t());  // .t() is the conjugate transpose
  R.diag() += w_nlos;
  return gain * R;
}

arma::cx_vec realize_channel(double gain, const arma::cx_vec& small_scale) {
  if (gain < 0.0) throw std::invalid_argument("channel gain < 0");
  return std::sqrt(gain) * small_scale;
}

}  // namespace leomimo
