// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <complex>

#include "leomimo/geometry.hpp"
#include "leomimo/rng.hpp"

namespace leomimo {

struct RadioConfig {
  double frequency_mhz = 2000.0;
  double bandwidth_hz = 1e6;
  int antennas_per_sat = 4;
  double antenna_spacing_wavelengths = 0.5;
  double rician_k = 10.0;
  double shadowing_var_db = 5.0;   // variance of the log-normal shadowing, dB^2
  double other_losses_db = 0.0;
  double sat_gain_dbi = 30.0;
  double user_gain_db = 0.0;
  double antenna_aperture_wavelengths = 10.0;
  double noise_psd_dbm_hz = -174.0;
  double pilot_power_dbw = 0.0;
  double max_tx_power_dbw = 15.0;

  double wavelength_m() const {
    return kSpeedOfLightMps / (frequency_mhz * 1e6);
  }
  double symbol_duration_s() const { return 1.0 / bandwidth_hz; }
  double noise_power_w() const {
    const double dbw = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) - 30.0;
    return std::pow(10.0, dbw / 10.0);
  }
  double pilot_power_w() const { return std::pow(10.0, pilot_power_dbw / 10.0); }
  double max_tx_power_w() const {
    return std::pow(10.0, max_tx_power_dbw / 10.0);
  }
};

/// Large-scale link budget: linear power gain plus its dB components.
struct LargeScale {
  double gain = 1.0;  // linear
  double fspl_db = 0.0;
  double shadow_db = 0.0;
  double ant_loss_db = 0.0;
  double other_db = 0.0;
};

/// Friis free-space loss in dB with f in MHz and r in km (the constant 32.45
/// belongs to that unit choice). Throws on non-positive input.
double free_space_path_loss_db(double f_mhz, double r_km);

/// Beam-misalignment loss of a circular-aperture pattern, linear factor >= 1.
/// eta is the aperture radius in wavelengths; the on-axis limit is exactly 1.
/// Pattern nulls are capped at 60 dB.
double antenna_loss_linear(double boresight_rad, double eta);

inline constexpr double kAntennaLossCapLinear = 1e6;  // 60 dB

/// Log-normal shadowing sample in dB: zero-mean Gaussian with the given
/// variance (dB^2).
double sample_shadowing_db(Rng& rng, double var_db2);

/// Combines path loss, shadowing, misalignment, other losses and the antenna
/// gains into the linear channel gain.
LargeScale large_scale(double range_m, double boresight_rad,
                       const RadioConfig& cfg, double shadow_db);

/// Line-of-sight array response of an L-element uniform linear array:
/// element l (0-based) is exp(-j * l * 2*pi * spacing_wl * sin(aoa)).
arma::cx_vec los_steering(double aoa_rad, int num_antennas, double spacing_wl);

/// Rician small-scale vector: sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * scatter,
/// scatter entries i.i.d. CN(0, 1). k is capped at 1e12.
arma::cx_vec sample_small_scale(const arma::cx_vec& los, double rician_k,
                                Rng& rng);

/// Unit-modulus delay phase exp(-j * 2*pi * dt / symbol_duration).
std::complex<double> phase_shift(double dt_s, double symbol_duration_s);

/// Channel covariance consistent with the sampling convention:
/// R = gain * (k/(1+k) * los*los^H + 1/(1+k) * I), so trace(R) = gain * L.
arma::cx_mat correlation_matrix(double gain, double rician_k,
                                const arma::cx_vec& los);

/// h = sqrt(gain) * g, so E[||h||^2] = gain * L.
arma::cx_vec realize_channel(double gain, const arma::cx_vec& small_scale);

}  // namespace leomimo
