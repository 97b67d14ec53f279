// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "leomimo/downlink.hpp"
#include "leomimo/harness.hpp"

using namespace leomimo;
using cxd = std::complex<double>;

namespace {

// one-user / one-satellite link set with explicit statistics
LinkSet single_link(double beta, double rician_k, int L) {
  LinkSet links;
  links.num_users = 1;
  links.num_sats = 1;
  links.num_antennas = L;
  links.rician_k = rician_k;
  links.gain = {beta};
  links.los = {los_steering(0.8, L, 0.5)};
  links.cov = {correlation_matrix(beta, rician_k, links.los[0])};
  return links;
}

ServingCluster cluster_of(int user, int rsap, std::vector<int> members,
                          int pilot) {
  ServingCluster cl;
  cl.user_id = user;
  cl.rsap_id = rsap;
  cl.members = std::move(members);
  cl.pilot_index = pilot;
  return cl;
}

}  // namespace

TEST_CASE("precoder: identity phase, quarter-turn phase, received gain") {
  const arma::cx_vec est = los_steering(1.3, 4, 0.5) * cxd{0.4, 0.2};

  const arma::cx_vec same = make_precoder(est, {1.0, 0.0},
                                          PrecoderMode::PhaseAware);
  const arma::cx_vec async = make_precoder(est, {1.0, 0.0},
                                           PrecoderMode::Asynchronous);
  CHECK(arma::norm(same - async) == 0.0);

  const cxd minus_j{0.0, -1.0};
  const arma::cx_vec rotated =
      make_precoder(est, minus_j, PrecoderMode::PhaseAware);
  CHECK(arma::norm(rotated - minus_j * est) == 0.0);
  CHECK(arma::norm(rotated) == doctest::Approx(arma::norm(est)));

  // perfect-CSI single link: the compensated received gain is real positive,
  // the uncompensated one is rotated by the conjugate delay phase
  Rng rng(3);
  const arma::cx_vec los = los_steering(0.2, 4, 0.5);
  const arma::cx_vec h = realize_channel(2.0, sample_small_scale(los, 8.0, rng));
  const cxd theta = std::polar(1.0, 2.4);
  const arma::cx_vec h_eff = theta * h;
  const cxd gain_pa = arma::dot(arma::conj(h_eff),
                                make_precoder(h, theta,
                                              PrecoderMode::PhaseAware));
  const cxd gain_as = arma::dot(arma::conj(h_eff),
                                make_precoder(h, theta,
                                              PrecoderMode::Asynchronous));
  const double h2 = std::pow(arma::norm(h), 2);
  CHECK(gain_pa.real() == doctest::Approx(h2).epsilon(1e-12));
  CHECK(std::abs(gain_pa.imag()) < 1e-12 * h2);
  CHECK(std::abs(gain_as - std::conj(theta) * h2) < 1e-12 * h2);
}

TEST_CASE("power allocation: single user, equal split, per-satellite budget") {
  const double p_max = 31.622776601683793;

  SUBCASE("a satellite serving one user spends the whole budget") {
    std::vector<ServingCluster> clusters = {cluster_of(0, 0, {0}, 0)};
    const std::vector<double> energy = {0.37};
    const auto kappa = allocate_power(clusters, energy, 1, p_max);
    CHECK(kappa[0] * energy[0] == doctest::Approx(p_max).epsilon(1e-12));
  }

  SUBCASE("four users split the budget evenly") {
    std::vector<ServingCluster> clusters;
    std::vector<double> energy(4, 0.0);
    for (int n = 0; n < 4; ++n) {
      clusters.push_back(cluster_of(n, 0, {0}, n));
      energy[n] = 0.1 * (n + 1);
    }
    const auto kappa = allocate_power(clusters, energy, 1, p_max);
    for (int n = 0; n < 4; ++n)
      CHECK(kappa[n] * energy[n] == doctest::Approx(p_max / 4).epsilon(1e-12));
  }

  SUBCASE("uncovered users and unserved satellites get nothing") {
    std::vector<ServingCluster> clusters = {cluster_of(0, 1, {1}, 0),
                                            ServingCluster{1, -1, {}, -1}};
    const std::vector<double> energy = {0.5, 0.5, 0.5, 0.5};  // 2 users x 2 sats
    const auto kappa = allocate_power(clusters, energy, 2, p_max);
    CHECK(kappa[0] == 0.0);  // user 0 not served by satellite 0
    CHECK(kappa[1] > 0.0);
    CHECK(kappa[2] == 0.0);  // user 1 uncovered
    CHECK(kappa[3] == 0.0);
  }
}

TEST_CASE("radiated power honors the budget under Monte Carlo estimation") {
  // one satellite, three served users, LMMSE-estimated precoders
  const double p_max = 10.0;
  const int tau_p = 8;
  const double sigma2 = 0.05;
  Rng rng(2718);

  std::vector<arma::cx_vec> los;
  std::vector<arma::cx_mat> cov;
  std::vector<LmmseFilter> filters;
  std::vector<double> energy;
  std::vector<ServingCluster> clusters;
  for (int n = 0; n < 3; ++n) {
    los.push_back(los_steering(0.4 + 0.7 * n, 2, 0.5));
    cov.push_back(correlation_matrix(0.5 + 0.3 * n, 6.0, los[n]));
    filters.push_back(
        make_lmmse_filter(cov[n], {1.0, 0.0}, 1.0, true, {}, tau_p, sigma2));
    energy.push_back(filters[n].estimate_energy);
    clusters.push_back(cluster_of(n, 0, {0}, n));
  }
  const auto kappa = allocate_power(clusters, energy, 1, p_max);

  double budget = 0.0;
  for (int n = 0; n < 3; ++n) budget += kappa[n] * energy[n];
  CHECK(budget <= p_max + 1e-9);

  const int draws = 30000;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    arma::cx_vec x(2, arma::fill::zeros);
    for (int n = 0; n < 3; ++n) {
      const arma::cx_vec h =
          realize_channel(0.5 + 0.3 * n, sample_small_scale(los[n], 6.0, rng));
      arma::cx_vec y = std::sqrt(static_cast<double>(tau_p)) * h;
      for (int l = 0; l < 2; ++l) y[l] += std::sqrt(sigma2) * rng.cgaussian();
      const arma::cx_vec est = lmmse_estimate(filters[n], y);
      x += std::sqrt(kappa[n]) * est * rng.gaussian();  // unit-power symbol
    }
    acc += std::pow(arma::norm(x), 2);
  }
  CHECK(acc / draws == doctest::Approx(p_max).epsilon(0.02));
}

TEST_CASE("degenerate single link matches the closed-form SINR") {
  // frozen fading, perfect CSI: SINR must equal P * beta * L / noise
  RadioConfig radio;
  radio.max_tx_power_dbw = 15.0;
  const double beta = 3.2e-13;
  const int L = 4;
  LinkSet links = single_link(beta, 1e12, L);

  TxSetup setup;
  setup.clusters = {cluster_of(0, 0, {0}, 0)};
  setup.delay_phase = {std::polar(1.0, 1.23)};

  PilotParams pilots{30, 200};
  const auto res = evaluate_sinr_se(links, {setup}, radio, pilots,
                                    CsiMode::Perfect, 10000, 99, 0);
  const double expected =
      radio.max_tx_power_w() * beta * L / radio.noise_power_w();
  for (const auto* u : {&res[0].phase_aware[0], &res[0].asynchronous[0]}) {
    CHECK(u->covered);
    CHECK(u->sinr == doctest::Approx(expected).epsilon(0.02));
    CHECK(u->se ==
          doctest::Approx(0.85 * std::log2(1.0 + expected)).epsilon(0.02));
  }
}

TEST_CASE("zero power coefficients give zero SINR and SE") {
  RadioConfig radio;
  LinkSet links = single_link(1e-13, 10.0, 2);
  TxSetup setup;
  setup.clusters = {cluster_of(0, 0, {0}, 0)};
  setup.delay_phase = {cxd{1.0, 0.0}};
  setup.kappa = {0.0};
  const auto res = evaluate_sinr_se(links, {setup}, radio, {30, 200},
                                    CsiMode::Lmmse, 50, 7, 0);
  CHECK(res[0].phase_aware[0].sinr == 0.0);
  CHECK(res[0].phase_aware[0].se == 0.0);
}

TEST_CASE("prelog factor is exact in every report") {
  PilotParams pilots{30, 200};
  CHECK(pilots.prelog() == 0.85);

  RadioConfig radio;
  LinkSet links = single_link(4e-13, 10.0, 2);
  TxSetup setup;
  setup.clusters = {cluster_of(0, 0, {0}, 0)};
  setup.delay_phase = {cxd{1.0, 0.0}};
  const auto res = evaluate_sinr_se(links, {setup}, radio, pilots,
                                    CsiMode::Lmmse, 200, 5, 0);
  const UserSe& u = res[0].phase_aware[0];
  REQUIRE(u.sinr > 0.0);
  CHECK(u.se == 0.85 * std::log2(1.0 + u.sinr));
}

TEST_CASE("hot path equals the module-level estimation pipeline") {
  // one trial, no interferers: replay the keyed draws and reproduce the
  // useful term with armadillo arithmetic
  RadioConfig radio;
  const double beta = 2.5e-13;
  const int L = 3;
  const std::uint64_t seed = 4242, drop = 17;
  LinkSet links = single_link(beta, 10.0, L);

  TxSetup setup;
  setup.clusters = {cluster_of(0, 0, {0}, 0)};
  const cxd theta = std::polar(1.0, -0.61);
  setup.delay_phase = {theta};

  PilotParams pilots{30, 200};
  const auto res = evaluate_sinr_se(links, {setup}, radio, pilots,
                                    CsiMode::Lmmse, 1, seed, drop);

  // replay the channel draw
  Rng fade(substream(seed, stream::kFading, drop, 0, 0));
  const double k = links.rician_k;
  const double w_los = std::sqrt(k / (1.0 + k));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k));
  arma::cx_vec h(L);
  for (int l = 0; l < L; ++l)
    h[l] = std::sqrt(beta) * (w_los * links.los[0][l] +
                              w_nlos * fade.cgaussian());

  // replay the pilot noise draw (keyed per satellite and pilot index)
  const std::uint64_t noise_key =
      substream(seed, stream::kPilotNoise, drop, 0, 0);
  Rng noise(substream(noise_key, stream::kPilotNoise, 0));
  arma::cx_vec y = std::sqrt(30.0 * radio.pilot_power_w()) * theta * h;
  for (int l = 0; l < L; ++l)
    y[l] += std::sqrt(radio.noise_power_w()) * noise.cgaussian();

  const LmmseFilter f = make_lmmse_filter(
      links.cov[0], theta, radio.pilot_power_w(), true, {}, 30,
      radio.noise_power_w());
  const arma::cx_vec est = lmmse_estimate(f, y);
  const auto kappa =
      allocate_power(setup.clusters, {f.estimate_energy}, 1,
                     radio.max_tx_power_w());
  const cxd z = std::sqrt(kappa[0]) * arma::dot(arma::conj(h), est);

  CHECK(res[0].phase_aware[0].coherent_gain ==
        doctest::Approx(std::norm(z)).epsilon(1e-9));
  CHECK(res[0].asynchronous[0].coherent_gain ==
        doctest::Approx(std::norm(std::conj(theta) * z)).epsilon(1e-9));
  CHECK(res[0].phase_aware[0].low_confidence);  // one trial, no batches
}

namespace {

// medium ensemble through the harness for trend checks
ExperimentConfig trend_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.geometry.num_satellites = 60;
  cfg.geometry.num_users = 6;
  cfg.geometry.altitude_m = 600e3;
  cfg.geometry.pointing = PointingMode::RegionCenter;
  cfg.geometry.user_region = {40.0, -100.0, 60e3};
  cfg.radio.antennas_per_sat = 2;
  cfg.pilot = {30, 200};
  cfg.policy.cluster_policies = {ClusterPolicy::UserCentric,
                                 ClusterPolicy::FullCooperation,
                                 ClusterPolicy::NonCooperative};
  cfg.policy.rsap_criteria = {RsapCriterion::BestChannel};
  cfg.policy.precoder_modes = {PrecoderMode::PhaseAware,
                               PrecoderMode::Asynchronous};
  cfg.monte_carlo.num_drops = 24;
  cfg.monte_carlo.trials_per_drop = 64;
  cfg.monte_carlo.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("policy ordering and pairing at desk scale") {
  const ExperimentConfig cfg = trend_config(112233);
  const ExperimentResult result = run(cfg);

  auto mean_se = [&](ClusterPolicy p) {
    double acc = 0.0;
    int count = 0;
    for (const auto& r : result.se_records)
      if (r.policy == p && r.mode == PrecoderMode::PhaseAware) {
        acc += r.se;
        ++count;
      }
    REQUIRE(count > 0);
    return acc / count;
  };
  const double uc = mean_se(ClusterPolicy::UserCentric);
  const double fc = mean_se(ClusterPolicy::FullCooperation);
  const double nct = mean_se(ClusterPolicy::NonCooperative);
  CHECK(nct < uc);
  CHECK(uc <= fc * 1.02);

  // paired per-(drop, user) comparison: user-centric beats non-cooperative
  // in the overwhelming majority of draws
  std::map<std::pair<int, int>, double> uc_se, nct_se;
  for (const auto& r : result.se_records) {
    if (r.mode != PrecoderMode::PhaseAware) continue;
    if (r.policy == ClusterPolicy::UserCentric)
      uc_se[{r.drop, r.user}] = r.se;
    if (r.policy == ClusterPolicy::NonCooperative)
      nct_se[{r.drop, r.user}] = r.se;
  }
  int total = 0, wins = 0;
  for (const auto& [key, se] : uc_se) {
    ++total;
    if (se >= nct_se[key]) ++wins;
  }
  CHECK(total == 24 * 6);
  CHECK(static_cast<double>(wins) / total > 0.8);
}

TEST_CASE("coincident clusters give identical reports across policies") {
  // with a single satellite, full cooperation and non-cooperative transmission
  // form the same clusters, so paired evaluation must coincide exactly
  ExperimentConfig cfg = trend_config(8821);
  cfg.geometry.num_satellites = 1;
  cfg.geometry.num_planes = 1;
  cfg.geometry.num_users = 3;
  cfg.policy.cluster_policies = {ClusterPolicy::FullCooperation,
                                 ClusterPolicy::NonCooperative};
  cfg.monte_carlo.num_drops = 6;
  const ExperimentResult result = run(cfg);

  std::map<std::tuple<int, int, PrecoderMode>, double> fc, nct;
  for (const auto& r : result.se_records) {
    if (r.policy == ClusterPolicy::FullCooperation)
      fc[{r.drop, r.user, r.mode}] = r.sinr;
    else
      nct[{r.drop, r.user, r.mode}] = r.sinr;
  }
  REQUIRE(!fc.empty());
  for (const auto& [key, sinr] : fc) CHECK(sinr == nct[key]);
}

TEST_CASE("phase compensation dominates the asynchronous coherent gain") {
  ExperimentConfig cfg = trend_config(555777);
  cfg.geometry.num_satellites = 40;
  cfg.geometry.num_users = 10;
  cfg.policy.cluster_policies = {ClusterPolicy::UserCentric};
  cfg.monte_carlo.num_drops = 100;
  cfg.monte_carlo.trials_per_drop = 50;
  const ExperimentResult result = run(cfg);

  std::map<std::pair<int, int>, const SeRecord*> pa, as;
  for (const auto& r : result.se_records) {
    if (r.mode == PrecoderMode::PhaseAware) pa[{r.drop, r.user}] = &r;
    if (r.mode == PrecoderMode::Asynchronous) as[{r.drop, r.user}] = &r;
  }
  REQUIRE(pa.size() == 1000);

  double mean_pa = 0.0, mean_as = 0.0;
  int multi = 0, strict = 0, violations = 0;
  for (const auto& [key, r] : pa) {
    const SeRecord* a = as[key];
    mean_pa += r->coherent_gain;
    mean_as += a->coherent_gain;
    if (r->cluster_size >= 2) {
      ++multi;
      if (r->coherent_gain > a->coherent_gain) ++strict;
      if (r->coherent_gain < a->coherent_gain * 0.999) ++violations;
    } else if (r->cluster_size == 1) {
      // single member: the reference phase is one, both modes coincide
      CHECK(r->coherent_gain == doctest::Approx(a->coherent_gain));
    }
  }
  CHECK(mean_pa / 1000 > mean_as / 1000);
  REQUIRE(multi > 100);
  CHECK(static_cast<double>(strict) / multi > 0.95);
  CHECK(static_cast<double>(violations) / multi < 0.02);
}

TEST_CASE("removing an interferer never lowers the victim's SINR") {
  RadioConfig radio;
  // two users, two satellites, everyone served by both
  LinkSet links;
  links.num_users = 2;
  links.num_sats = 2;
  links.num_antennas = 2;
  links.rician_k = 10.0;
  for (int k = 0; k < 4; ++k) {
    links.gain.push_back(2e-13 * (k + 1));
    links.los.push_back(los_steering(0.3 + 0.5 * k, 2, 0.5));
    links.cov.push_back(
        correlation_matrix(links.gain[k], 10.0, links.los[k]));
  }
  TxSetup both;
  both.clusters = {cluster_of(0, 0, {0, 1}, 0), cluster_of(1, 1, {0, 1}, 1)};
  both.delay_phase = {cxd{1, 0}, std::polar(1.0, 0.5), std::polar(1.0, -1.1),
                      cxd{1, 0}};
  both.kappa = {1e12, 1e12, 1e12, 1e12};  // fixed coefficients

  TxSetup removed = both;
  removed.kappa = {1e12, 1e12, 0.0, 0.0};  // user 1 transmits nothing

  const auto res = evaluate_sinr_se(links, {both, removed}, radio, {30, 200},
                                    CsiMode::Lmmse, 300, 31337, 0);
  CHECK(res[1].phase_aware[0].sinr >= res[0].phase_aware[0].sinr);
  CHECK(res[1].asynchronous[0].sinr >= res[0].asynchronous[0].sinr);
  CHECK(res[1].phase_aware[0].interference == 0.0);
}

TEST_CASE("doubling the trials shrinks the SINR standard error by ~1/sqrt(2)") {
  ExperimentConfig cfg = trend_config(31007);
  cfg.geometry.num_satellites = 40;
  cfg.geometry.num_users = 10;
  cfg.policy.cluster_policies = {ClusterPolicy::UserCentric};

  double ratio_acc = 0.0;
  int count = 0;
  for (int drop = 0; drop < 3; ++drop) {
    const DropContext ctx = make_drop(cfg, drop);
    ClusterController ctl(ClusterPolicy::UserCentric, 30, 10, 40);
    const int M = 40;
    ctl.form(ctx.snapshot,
             [&](int n, int m) { return ctx.links.gain[n * M + m]; }, 0.0);
    TxSetup setup;
    setup.clusters = ctl.clusters();
    setup.delay_phase.assign(10 * 40, cxd{1.0, 0.0});

    const auto lo = evaluate_sinr_se(ctx.links, {setup}, cfg.radio, cfg.pilot,
                                     CsiMode::Lmmse, 400, 1, drop);
    const auto hi = evaluate_sinr_se(ctx.links, {setup}, cfg.radio, cfg.pilot,
                                     CsiMode::Lmmse, 800, 1, drop);
    for (int n = 0; n < 10; ++n) {
      if (!lo[0].phase_aware[n].covered) continue;
      const double a = lo[0].phase_aware[n].sinr_stderr;
      const double b = hi[0].phase_aware[n].sinr_stderr;
      if (a > 0.0 && std::isfinite(a) && std::isfinite(b)) {
        ratio_acc += b / a;
        ++count;
      }
    }
  }
  REQUIRE(count >= 20);
  const double mean_ratio = ratio_acc / count;
  CHECK(mean_ratio > 0.7071 * 0.8);
  CHECK(mean_ratio < 0.7071 * 1.2);
}

TEST_CASE("perfect channel knowledge upper-bounds the estimated one") {
  ExperimentConfig cfg = trend_config(40404);
  cfg.geometry.num_satellites = 40;
  cfg.geometry.num_users = 8;
  cfg.policy.cluster_policies = {ClusterPolicy::UserCentric};
  cfg.monte_carlo.num_drops = 12;

  ExperimentConfig perfect = cfg;
  perfect.policy.csi = CsiMode::Perfect;

  const ExperimentResult est = run(cfg);
  const ExperimentResult ideal = run(perfect);

  double mean_est = 0.0, mean_ideal = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < est.se_records.size(); ++i) {
    if (est.se_records[i].mode != PrecoderMode::PhaseAware) continue;
    mean_est += est.se_records[i].se;
    mean_ideal += ideal.se_records[i].se;
    ++count;
  }
  REQUIRE(count > 0);
  CHECK(mean_ideal >= mean_est);
}
