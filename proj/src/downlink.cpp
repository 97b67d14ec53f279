// SPDX-License-Identifier: Apache-2.0
#include "leomimo/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace leomimo {

namespace {

using cxd = std::complex<double>;

// Flattened per-(user, member) estimation state for the trial loop.
struct MemberLink {
  int sat = -1;
  cxd theta{1.0, 0.0};
  double sqrt_kappa = 0.0;
  double sqrt_tp_power = 0.0;       // sqrt(tau_p * pilot power)
  std::vector<cxd> weight;          // LMMSE weight, L*L row-major
  // co-pilot users served by this satellite (contaminating the despread
  // observation): pairs of (link index into the h buffer, sqrt(tau_p p_j) * theta_jm)
  std::vector<std::pair<std::size_t, cxd>> contaminators;
  std::uint64_t noise_key = 0;      // keyed per (satellite, pilot index)
};

struct SetupState {
  std::vector<std::vector<MemberLink>> member_links;  // per user
  std::vector<double> sqrt_kappa_flat;                // N*M
  std::vector<int> cluster_size;
  std::vector<bool> covered;
};

struct Accum {
  cxd sum_z{0.0, 0.0};
  double sum_abs2_z = 0.0;
  double sum_interf = 0.0;
};

struct UserAcc {
  Accum total_pa, total_as;
  std::vector<Accum> batch_pa, batch_as;
};

UserSe finalize(const Accum& total, const std::vector<Accum>& batches,
                const std::vector<int>& batch_trials, int trials,
                double noise_w, double prelog, bool covered,
                int cluster_size) {
  UserSe r;
  r.covered = covered;
  r.cluster_size = cluster_size;
  r.noise_w = noise_w;
  if (!covered || trials < 1) return r;
  const double inv_t = 1.0 / trials;
  const cxd mean_z = total.sum_z * inv_t;
  r.coherent_gain = std::norm(mean_z);
  r.bf_uncertainty = std::max(0.0, total.sum_abs2_z * inv_t - r.coherent_gain);
  r.interference = total.sum_interf * inv_t;
  r.sinr = r.coherent_gain / (r.bf_uncertainty + r.interference + noise_w);
  r.se = prelog * std::log2(1.0 + r.sinr);

  // batch-means standard error of the SINR estimate
  std::vector<double> batch_sinr;
  batch_sinr.reserve(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (batch_trials[b] < 1) continue;
    const double inv_bt = 1.0 / batch_trials[b];
    const double ds = std::norm(batches[b].sum_z * inv_bt);
    const double var = std::max(0.0, batches[b].sum_abs2_z * inv_bt - ds);
    const double f = batches[b].sum_interf * inv_bt;
    batch_sinr.push_back(ds / (var + f + noise_w));
  }
  if (batch_sinr.size() >= 2) {
    double mean = 0.0;
    for (double v : batch_sinr) mean += v;
    mean /= batch_sinr.size();
    double var = 0.0;
    for (double v : batch_sinr) var += (v - mean) * (v - mean);
    var /= (batch_sinr.size() - 1);
    r.sinr_stderr = std::sqrt(var / batch_sinr.size());
  } else {
    r.sinr_stderr = std::numeric_limits<double>::infinity();
  }
  r.low_confidence = !(r.sinr_stderr <= 0.1 * r.sinr);
  if (r.sinr == 0.0) r.low_confidence = false;
  return r;
}

}  // namespace

const char* to_string(PrecoderMode m) {
  return m == PrecoderMode::PhaseAware ? "phase_aware" : "asynchronous";
}

const char* to_string(PowerMode m) {
  return m == PowerMode::EqualSplit ? "equal_split" : "uniform_coefficient";
}

const char* to_string(CsiMode m) {
  return m == CsiMode::Lmmse ? "lmmse" : "perfect";
}

arma::cx_vec make_precoder(const arma::cx_vec& estimate,
                           std::complex<double> delay_phase,
                           PrecoderMode mode) {
  if (mode == PrecoderMode::PhaseAware) return delay_phase * estimate;
  return estimate;
}

std::vector<double> allocate_power(const std::vector<ServingCluster>& clusters,
                                   const std::vector<double>& precoder_energy,
                                   int num_sats, double max_power_w) {
  std::vector<int> served(num_sats, 0);
  for (const auto& cl : clusters)
    if (cl.covered())
      for (int m : cl.members) ++served[m];

  std::vector<double> kappa(precoder_energy.size(), 0.0);
  for (std::size_t n = 0; n < clusters.size(); ++n) {
    const auto& cl = clusters[n];
    if (!cl.covered()) continue;
    for (int m : cl.members) {
      const std::size_t k = n * num_sats + m;
      const double energy = precoder_energy[k];
      if (served[m] > 0 && energy > 0.0)
        kappa[k] = max_power_w / (served[m] * energy);
    }
  }
  return kappa;
}

std::vector<double> uniform_power_coefficient(
    const std::vector<ServingCluster>& clusters,
    const std::vector<double>& precoder_energy, int num_sats,
    double max_power_w) {
  std::vector<double> radiated(num_sats, 0.0);
  for (std::size_t n = 0; n < clusters.size(); ++n) {
    const auto& cl = clusters[n];
    if (!cl.covered()) continue;
    for (int m : cl.members) radiated[m] += precoder_energy[n * num_sats + m];
  }
  const double busiest = *std::max_element(radiated.begin(), radiated.end());
  const double kappa = busiest > 0.0 ? max_power_w / busiest : 0.0;

  std::vector<double> out(precoder_energy.size(), 0.0);
  for (std::size_t n = 0; n < clusters.size(); ++n) {
    const auto& cl = clusters[n];
    if (!cl.covered()) continue;
    for (int m : cl.members)
      if (precoder_energy[n * num_sats + m] > 0.0)
        out[n * num_sats + m] = kappa;
  }
  return out;
}

std::vector<SetupEvalResult> evaluate_sinr_se(
    const LinkSet& links, const std::vector<TxSetup>& setups,
    const RadioConfig& radio, const PilotParams& pilots, CsiMode csi,
    int trials, std::uint64_t seed, std::uint64_t drop_index,
    PowerMode power) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const int N = links.num_users;
  const int M = links.num_sats;
  const int L = links.num_antennas;
  if (L > 16) throw std::invalid_argument("more than 16 antennas unsupported");
  const double noise_w = radio.noise_power_w();
  const double pilot_p = radio.pilot_power_w();
  const double tp = static_cast<double>(pilots.tau_p);
  const double k_factor = links.rician_k;
  const double w_los = std::sqrt(std::min(k_factor, 1e12) /
                                 (1.0 + std::min(k_factor, 1e12)));
  const double w_nlos = std::sqrt(1.0 / (1.0 + std::min(k_factor, 1e12)));

  // Precompute per-setup estimation filters and power allocation.
  std::vector<SetupState> states(setups.size());
  std::vector<bool> sat_active(M, false);
  for (std::size_t s = 0; s < setups.size(); ++s) {
    const TxSetup& setup = setups[s];
    SetupState& st = states[s];
    st.member_links.resize(N);
    st.cluster_size.assign(N, 0);
    st.covered.assign(N, false);

    // pilot index per user (from the clusters' pilot fields)
    std::vector<int> pilot_of(N, -1);
    for (int n = 0; n < N; ++n) {
      const auto& cl = setup.clusters[n];
      if (cl.covered()) pilot_of[n] = cl.pilot_index;
    }

    std::vector<double> energy(static_cast<std::size_t>(N) * M, 0.0);
    for (int n = 0; n < N; ++n) {
      const auto& cl = setup.clusters[n];
      st.covered[n] = cl.covered();
      st.cluster_size[n] = static_cast<int>(cl.members.size());
      if (!cl.covered()) continue;
      for (int m : cl.members) {
        sat_active[m] = true;
        const std::size_t k = links.idx(n, m);
        MemberLink ml;
        ml.sat = m;
        ml.theta = setup.delay_phase[k];
        ml.sqrt_tp_power = std::sqrt(tp * pilot_p);
        ml.noise_key = substream(seed, stream::kPilotNoise, drop_index,
                                 static_cast<std::uint64_t>(m),
                                 static_cast<std::uint64_t>(pilot_of[n]));
        // other served co-pilot users contaminate this satellite's despread
        std::vector<CopilotStat> copilots;
        for (int j = 0; j < N; ++j) {
          if (j == n || pilot_of[j] != pilot_of[n]) continue;
          if (!setup.clusters[j].is_member(m)) continue;
          copilots.push_back({links.cov[links.idx(j, m)], pilot_p, true});
          ml.contaminators.emplace_back(
              links.idx(j, m),
              std::sqrt(tp * pilot_p) * setup.delay_phase[links.idx(j, m)]);
        }
        if (csi == CsiMode::Lmmse) {
          const LmmseFilter f =
              make_lmmse_filter(links.cov[k], ml.theta, pilot_p, true,
                                copilots, pilots.tau_p, noise_w);
          ml.weight.resize(static_cast<std::size_t>(L) * L);
          for (int r = 0; r < L; ++r)
            for (int c = 0; c < L; ++c)
              ml.weight[static_cast<std::size_t>(r) * L + c] = f.weight(r, c);
          energy[k] = f.estimate_energy;
        } else {
          energy[k] = links.gain[k] * L;  // E||h||^2
        }
        st.member_links[n].push_back(std::move(ml));
      }
    }

    std::vector<double> kappa;
    if (!setup.kappa.empty()) {
      if (setup.kappa.size() != energy.size())
        throw std::invalid_argument("kappa must have one entry per link");
      kappa = setup.kappa;
    } else if (power == PowerMode::UniformCoefficient) {
      kappa = uniform_power_coefficient(setup.clusters, energy, M,
                                        radio.max_tx_power_w());
    } else {
      kappa = allocate_power(setup.clusters, energy, M,
                             radio.max_tx_power_w());
    }
    st.sqrt_kappa_flat.resize(kappa.size());
    for (std::size_t k = 0; k < kappa.size(); ++k)
      st.sqrt_kappa_flat[k] = std::sqrt(kappa[k]);
    for (int n = 0; n < N; ++n)
      for (MemberLink& ml : st.member_links[n])
        ml.sqrt_kappa = st.sqrt_kappa_flat[links.idx(n, ml.sat)];
  }

  // Trial loop. Channel draws are shared by every setup.
  const int batch_count = std::min(10, trials);
  std::vector<int> batch_trials(batch_count, 0);
  for (int t = 0; t < trials; ++t)
    ++batch_trials[static_cast<std::size_t>(
        static_cast<std::int64_t>(t) * batch_count / trials)];
  std::vector<std::vector<UserAcc>> acc(setups.size());
  for (auto& a : acc) {
    a.resize(N);
    for (auto& u : a) {
      u.batch_pa.resize(batch_count);
      u.batch_as.resize(batch_count);
    }
  }

  std::vector<cxd> h(static_cast<std::size_t>(N) * M * L);
  std::vector<cxd> hhat(static_cast<std::size_t>(N) * M * L);
  const double noise_amp = std::sqrt(noise_w);

  for (int t = 0; t < trials; ++t) {
    const int batch = static_cast<int>(
        static_cast<std::int64_t>(t) * batch_count / trials);

    // small-scale realization for every link toward an active satellite
    for (int m = 0; m < M; ++m) {
      if (!sat_active[m]) continue;
      for (int n = 0; n < N; ++n) {
        const std::size_t k = links.idx(n, m);
        Rng rng(substream(seed, stream::kFading, drop_index, t, k));
        const arma::cx_vec& los = links.los[k];
        const double amp = std::sqrt(links.gain[k]);
        cxd* hk = &h[k * L];
        for (int l = 0; l < L; ++l)
          hk[l] = amp * (w_los * los[l] + w_nlos * rng.cgaussian());
      }
    }

    for (std::size_t s = 0; s < setups.size(); ++s) {
      const SetupState& st = states[s];

      // channel estimates for every served link
      for (int i = 0; i < N; ++i) {
        for (const MemberLink& ml : st.member_links[i]) {
          const std::size_t k = links.idx(i, ml.sat);
          const cxd* hi = &h[k * L];
          cxd y[16];  // despread observation, L <= 16
          {
            Rng noise_rng(substream(ml.noise_key, stream::kPilotNoise,
                                    static_cast<std::uint64_t>(t)));
            const cxd coef = ml.sqrt_tp_power * ml.theta;
            for (int l = 0; l < L; ++l)
              y[l] = coef * hi[l] + noise_amp * noise_rng.cgaussian();
            for (const auto& [jk, jcoef] : ml.contaminators) {
              const cxd* hj = &h[jk * L];
              for (int l = 0; l < L; ++l) y[l] += jcoef * hj[l];
            }
          }
          cxd* est = &hhat[k * L];
          if (csi == CsiMode::Perfect) {
            for (int l = 0; l < L; ++l) est[l] = hi[l];
          } else {
            const cxd* w = ml.weight.data();
            for (int r = 0; r < L; ++r) {
              cxd srow{0.0, 0.0};
              for (int c = 0; c < L; ++c) srow += w[r * L + c] * y[c];
              est[r] = srow;
            }
          }
        }
      }

      // received useful and interfering terms per user
      for (int n = 0; n < N; ++n) {
        if (!st.covered[n]) continue;
        UserAcc& ua = acc[s][n];

        cxd z_pa{0.0, 0.0}, z_as{0.0, 0.0};
        for (const MemberLink& ml : st.member_links[n]) {
          const std::size_t k = links.idx(n, ml.sat);
          const cxd* hn = &h[k * L];
          const cxd* est = &hhat[k * L];
          cxd inner{0.0, 0.0};
          for (int l = 0; l < L; ++l) inner += std::conj(hn[l]) * est[l];
          z_pa += ml.sqrt_kappa * inner;
          z_as += ml.sqrt_kappa * std::conj(ml.theta) * inner;
        }
        ua.total_pa.sum_z += z_pa;
        ua.total_pa.sum_abs2_z += std::norm(z_pa);
        ua.total_as.sum_z += z_as;
        ua.total_as.sum_abs2_z += std::norm(z_as);
        ua.batch_pa[batch].sum_z += z_pa;
        ua.batch_pa[batch].sum_abs2_z += std::norm(z_pa);
        ua.batch_as[batch].sum_z += z_as;
        ua.batch_as[batch].sum_abs2_z += std::norm(z_as);

        double f_pa = 0.0, f_as = 0.0;
        for (int i = 0; i < N; ++i) {
          if (i == n || !st.covered[i]) continue;
          cxd zi_pa{0.0, 0.0}, zi_as{0.0, 0.0};
          for (const MemberLink& ml : st.member_links[i]) {
            const std::size_t kn = links.idx(n, ml.sat);
            const std::size_t ki = links.idx(i, ml.sat);
            const cxd* hn = &h[kn * L];
            const cxd* est = &hhat[ki * L];
            cxd inner{0.0, 0.0};
            for (int l = 0; l < L; ++l) inner += std::conj(hn[l]) * est[l];
            // effective channel of the victim link carries conj(theta_nm)
            const cxd common =
                ml.sqrt_kappa * std::conj(setups[s].delay_phase[kn]) * inner;
            zi_pa += common * ml.theta;
            zi_as += common;
          }
          f_pa += std::norm(zi_pa);
          f_as += std::norm(zi_as);
        }
        ua.total_pa.sum_interf += f_pa;
        ua.total_as.sum_interf += f_as;
        ua.batch_pa[batch].sum_interf += f_pa;
        ua.batch_as[batch].sum_interf += f_as;
      }
    }
  }

  std::vector<SetupEvalResult> results(setups.size());
  const double prelog = pilots.prelog();
  for (std::size_t s = 0; s < setups.size(); ++s) {
    results[s].phase_aware.resize(N);
    results[s].asynchronous.resize(N);
    for (int n = 0; n < N; ++n) {
      results[s].phase_aware[n] = finalize(
          acc[s][n].total_pa, acc[s][n].batch_pa, batch_trials, trials,
          noise_w, prelog, states[s].covered[n], states[s].cluster_size[n]);
      results[s].asynchronous[n] = finalize(
          acc[s][n].total_as, acc[s][n].batch_as, batch_trials, trials,
          noise_w, prelog, states[s].covered[n], states[s].cluster_size[n]);
    }
  }
  return results;
}

}  // namespace leomimo
