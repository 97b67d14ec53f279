// SPDX-License-Identifier: Apache-2.0
#include "leomimo/harness.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace leomimo {

namespace {

// Lazily evaluated remaining-service-time table for one snapshot.
class ServiceTimeCache {
 public:
  ServiceTimeCache(const std::vector<Satellite>& sats,
                   const ConstellationSnapshot& snap, double min_elev_deg)
      : sats_(sats),
        snap_(snap),
        min_elev_deg_(min_elev_deg),
        horizon_(orbital_period_s(sats.empty() ? 600e3
                                               : sats[0].orbit.altitude_m)),
        cache_(static_cast<std::size_t>(snap.num_users) * snap.num_sats,
               std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(int user, int sat) {
    const std::size_t k =
        static_cast<std::size_t>(user) * snap_.num_sats + sat;
    if (std::isnan(cache_[k]))
      cache_[k] = service_time_s(sats_[sat], snap_.user_pos[user],
                                 snap_.time_s, min_elev_deg_, horizon_);
    return cache_[k];
  }

 private:
  const std::vector<Satellite>& sats_;
  const ConstellationSnapshot& snap_;
  double min_elev_deg_;
  double horizon_;
  std::vector<double> cache_;
};

}  // namespace

DropContext make_drop(const ExperimentConfig& cfg, int drop_index) {
  const std::uint64_t seed = cfg.monte_carlo.seed;
  DropContext ctx;

  Rng const_rng(substream(seed, stream::kConstellation, drop_index));
  ctx.sats = build_constellation(cfg.geometry, const_rng);

  Rng user_rng(substream(seed, stream::kUsers, drop_index));
  ctx.users = drop_users(cfg.geometry, user_rng);

  Rng time_rng(substream(seed, stream::kSnapshotTime, drop_index));
  const double t = time_rng.uniform(0.0, 86400.0);
  ctx.snapshot = make_snapshot(ctx.sats, ctx.users, t, cfg.geometry);

  const int N = cfg.geometry.num_users;
  const int M = cfg.geometry.num_satellites;
  const int L = cfg.radio.antennas_per_sat;
  const std::size_t links = static_cast<std::size_t>(N) * M;

  ctx.shadow_db.resize(links);
  ctx.aoa_rad.resize(links);
  ctx.links.num_users = N;
  ctx.links.num_sats = M;
  ctx.links.num_antennas = L;
  ctx.links.rician_k = cfg.radio.rician_k;
  ctx.links.gain.resize(links);
  ctx.links.los.resize(links);
  ctx.links.cov.resize(links);

  const double spacing_wl = cfg.radio.antenna_spacing_wavelengths;
  for (std::size_t k = 0; k < links; ++k) {
    Rng shadow_rng(substream(seed, stream::kShadowing, drop_index, k));
    ctx.shadow_db[k] =
        sample_shadowing_db(shadow_rng, cfg.radio.shadowing_var_db);
    Rng aoa_rng(substream(seed, stream::kAoa, drop_index, k));
    ctx.aoa_rad[k] = aoa_rng.uniform(0.0, 2.0 * std::numbers::pi);

    const int n = static_cast<int>(k) / M;
    const int m = static_cast<int>(k) % M;
    const LargeScale ls =
        large_scale(ctx.snapshot.range(n, m), ctx.snapshot.boresight(n, m),
                    cfg.radio, ctx.shadow_db[k]);
    // the Earth blocks below-horizon paths entirely
    const bool blocked = ctx.snapshot.elevation(n, m) < 0.0;
    ctx.links.gain[k] = blocked ? 0.0 : ls.gain;
    ctx.links.los[k] = los_steering(ctx.aoa_rad[k], L, spacing_wl);
    ctx.links.cov[k] = correlation_matrix(ctx.links.gain[k],
                                          cfg.radio.rician_k, ctx.links.los[k]);
  }
  return ctx;
}

ExperimentResult run(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = config_echo(cfg);

  const int N = cfg.geometry.num_users;
  const int M = cfg.geometry.num_satellites;
  const double symbol_s = cfg.radio.symbol_duration_s();

  for (int drop = 0; drop < cfg.monte_carlo.num_drops; ++drop) {
    const DropContext ctx = make_drop(cfg, drop);

    // One transmission setup per (criterion, policy); all evaluated against
    // the same channel draws.
    std::vector<TxSetup> setups;
    struct SetupTag {
      RsapCriterion criterion;
      ClusterPolicy policy;
    };
    std::vector<SetupTag> tags;

    for (RsapCriterion criterion : cfg.policy.rsap_criteria) {
      ServiceTimeCache zeta(ctx.sats, ctx.snapshot,
                            cfg.geometry.min_elevation_deg);
      ScoreFn score;
      if (criterion == RsapCriterion::BestChannel) {
        score = [&ctx, M](int n, int m) {
          return ctx.links.gain[static_cast<std::size_t>(n) * M + m];
        };
      } else {
        score = [&zeta](int n, int m) { return zeta(n, m); };
      }

      for (ClusterPolicy policy : cfg.policy.cluster_policies) {
        ClusterController ctl(policy, cfg.pilot.tau_p, N, M);
        ctl.form(ctx.snapshot, score, ctx.snapshot.time_s);

        TxSetup setup;
        setup.clusters = ctl.clusters();
        setup.delay_phase.assign(static_cast<std::size_t>(N) * M,
                                 {1.0, 0.0});
        for (int n = 0; n < N; ++n) {
          const ServingCluster& cl = setup.clusters[n];
          if (!cl.covered()) continue;
          const double r_ref = ctx.snapshot.range(n, cl.rsap_id);
          for (int m = 0; m < M; ++m) {
            const double dt =
                m == cl.rsap_id
                    ? 0.0
                    : (ctx.snapshot.range(n, m) - r_ref) / kSpeedOfLightMps;
            setup.delay_phase[static_cast<std::size_t>(n) * M + m] =
                phase_shift(dt, symbol_s);
          }
        }
        setups.push_back(std::move(setup));
        tags.push_back({criterion, policy});

        // the coverage pass below replays the identical user-centric
        // formation, so skip its events here to avoid duplicates
        const bool replayed_by_coverage =
            cfg.monte_carlo.measure_coverage &&
            policy == ClusterPolicy::UserCentric;
        if (!replayed_by_coverage)
          for (const ClusterEvent& ev : ctl.events())
            result.events.push_back({drop, policy, criterion, ev});
      }
    }

    const std::vector<SetupEvalResult> evals = evaluate_sinr_se(
        ctx.links, setups, cfg.radio, cfg.pilot, cfg.policy.csi,
        cfg.monte_carlo.trials_per_drop, cfg.monte_carlo.seed, drop,
        cfg.policy.power);

    for (std::size_t s = 0; s < setups.size(); ++s) {
      for (PrecoderMode mode : cfg.policy.precoder_modes) {
        const std::vector<UserSe>& users = mode == PrecoderMode::PhaseAware
                                               ? evals[s].phase_aware
                                               : evals[s].asynchronous;
        for (int n = 0; n < N; ++n) {
          const UserSe& u = users[n];
          SeRecord r;
          r.drop = drop;
          r.user = n;
          r.policy = tags[s].policy;
          r.criterion = tags[s].criterion;
          r.mode = mode;
          r.sinr = u.sinr;
          r.se = u.se;
          r.cluster_size = u.cluster_size;
          r.coherent_gain = u.coherent_gain;
          r.bf_uncertainty = u.bf_uncertainty;
          r.interference = u.interference;
          r.noise_w = u.noise_w;
          r.sinr_stderr = u.sinr_stderr;
          r.low_confidence = u.low_confidence;
          result.se_records.push_back(r);
        }
      }
    }

    if (cfg.monte_carlo.measure_coverage) {
      for (RsapCriterion criterion : cfg.policy.rsap_criteria) {
        ScoreProvider provider;
        if (criterion == RsapCriterion::BestChannel) {
          provider = [&cfg, &ctx, M](const ConstellationSnapshot& snap) {
            return ScoreFn([&cfg, &ctx, &snap, M](int n, int m) {
              const std::size_t k = static_cast<std::size_t>(n) * M + m;
              return large_scale(snap.range(n, m), snap.boresight(n, m),
                                 cfg.radio, ctx.shadow_db[k])
                  .gain;
            });
          };
        } else {
          provider = [&cfg, &ctx](const ConstellationSnapshot& snap) {
            auto zeta = std::make_shared<ServiceTimeCache>(
                ctx.sats, snap, cfg.geometry.min_elevation_deg);
            return ScoreFn(
                [zeta](int n, int m) { return (*zeta)(n, m); });
          };
        }

        const CoverageOutcome cov = measure_coverage(
            ctx.sats, ctx.users, cfg.geometry, provider, cfg.pilot.tau_p,
            ctx.snapshot.time_s, cfg.monte_carlo.epoch_step_s,
            cfg.monte_carlo.horizon_s);

        for (int n = 0; n < N; ++n) {
          CoverageRecord r;
          r.drop = drop;
          r.user = n;
          r.criterion = criterion;
          r.covered = cov.covered_at_start[n];
          r.coverage_s = cov.covered_at_start[n] ? cov.coverage_s[n] : 0.0;
          r.formation_service_s =
              cov.covered_at_start[n] ? cov.formation_service_s[n] : 0.0;
          result.coverage_records.push_back(r);
        }
        for (const ClusterSizeSample& s : cov.size_samples)
          result.size_records.push_back(
              {drop, s.time_s, s.user_id, criterion, s.size});
        for (const ClusterEvent& ev : cov.events)
          result.events.push_back(
              {drop, ClusterPolicy::UserCentric, criterion, ev});
      }
    }
  }
  return result;
}

}  // namespace leomimo
