// SPDX-License-Identifier: Apache-2.0
#include "leomimo/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leomimo {

const char* to_string(ClusterPolicy p) {
  switch (p) {
    case ClusterPolicy::UserCentric: return "uc";
    case ClusterPolicy::FullCooperation: return "fc";
    case ClusterPolicy::NonCooperative: return "nct";
  }
  return "?";
}

const char* to_string(RsapCriterion c) {
  switch (c) {
    case RsapCriterion::BestChannel: return "best_channel";
    case RsapCriterion::MaxServiceTime: return "max_service_time";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Join: return "JOIN";
    case EventKind::Leave: return "LEAVE";
    case EventKind::Handover: return "HANDOVER";
    case EventKind::Deny: return "DENY";
    case EventKind::NoCoverage: return "NO_COVERAGE";
  }
  return "?";
}

bool ServingCluster::is_member(int sat) const {
  return std::binary_search(members.begin(), members.end(), sat);
}

std::optional<int> select_rsap(const std::vector<int>& candidates, int user,
                               const ScoreFn& score) {
  std::optional<int> best;
  double best_score = 0.0;
  for (int sat : candidates) {
    const double s = score(user, sat);
    if (!best || s > best_score) {
      best = sat;
      best_score = s;
    }
  }
  return best;
}

ClusterController::ClusterController(ClusterPolicy policy, int tau_p,
                                     int num_users, int num_sats)
    : policy_(policy), num_sats_(num_sats), book_(tau_p) {
  clusters_.resize(num_users);
  for (int n = 0; n < num_users; ++n) clusters_[n].user_id = n;
  prev_visible_.resize(num_users);
}

void ClusterController::form(const ConstellationSnapshot& snap,
                             const ScoreFn& score, double t_s) {
  for (int n = 0; n < static_cast<int>(clusters_.size()); ++n)
    attempt_access(n, snap, score, t_s);
}

bool ClusterController::attempt_access(int user,
                                       const ConstellationSnapshot& snap,
                                       const ScoreFn& score, double t_s) {
  ServingCluster& cl = clusters_[user];
  prev_visible_[user] = snap.visible[user];
  std::vector<int> candidates = snap.visible[user];

  while (!candidates.empty()) {
    const int rsap = *select_rsap(candidates, user, score);
    std::optional<int> pilot;
    if (policy_ == ClusterPolicy::FullCooperation) {
      // Full cooperation never denies: reuse indices round-robin once the
      // book is exhausted at the reference satellite.
      pilot = book_.assign(user, rsap);
      if (!pilot) {
        const int reused = user % book_.tau_p();
        book_.set_assignment(user, reused);
        pilot = reused;
      }
    } else {
      pilot = book_.assign(user, rsap);
      if (!pilot) {
        events_.push_back({t_s, EventKind::Deny, user, rsap});
        candidates.erase(
            std::find(candidates.begin(), candidates.end(), rsap));
        continue;
      }
    }

    cl.rsap_id = rsap;
    cl.pilot_index = *pilot;
    cl.formed_at_s = t_s;
    cl.members = {rsap};
    events_.push_back({t_s, EventKind::Join, user, rsap});

    if (policy_ == ClusterPolicy::UserCentric) {
      for (int sat : snap.visible[user]) {
        if (sat == rsap) continue;
        if (book_.is_free(sat, *pilot)) {
          book_.occupy(sat, *pilot, user);
          cl.members.push_back(sat);
          events_.push_back({t_s, EventKind::Join, user, sat});
        }
      }
      std::sort(cl.members.begin(), cl.members.end());
    } else if (policy_ == ClusterPolicy::FullCooperation) {
      cl.members.resize(num_sats_);
      for (int m = 0; m < num_sats_; ++m) cl.members[m] = m;
      for (int m = 0; m < num_sats_; ++m)
        if (m != rsap) book_.try_occupy(m, *pilot, user);
    }
    return true;
  }

  events_.push_back({t_s, EventKind::NoCoverage, user, -1});
  return false;
}

void ClusterController::teardown(int user) {
  ServingCluster& cl = clusters_[user];
  if (!cl.covered()) return;
  for (int sat : cl.members) book_.release(sat, cl.pilot_index, user);
  book_.unassign(user);
  cl.rsap_id = -1;
  cl.pilot_index = -1;
  cl.members.clear();
}

void ClusterController::update(const ConstellationSnapshot& snap,
                               const ScoreFn& score, double t_s) {
  for (int user = 0; user < static_cast<int>(clusters_.size()); ++user) {
    ServingCluster& cl = clusters_[user];
    const std::vector<int>& now_visible = snap.visible[user];

    if (!cl.covered()) {
      attempt_access(user, snap, score, t_s);
      continue;
    }

    const bool rsap_visible = std::binary_search(
        now_visible.begin(), now_visible.end(), cl.rsap_id);
    if (!rsap_visible) {
      events_.push_back({t_s, EventKind::Handover, user, cl.rsap_id});
      teardown(user);
      attempt_access(user, snap, score, t_s);
      continue;
    }

    if (policy_ == ClusterPolicy::UserCentric) {
      // members that left the visibility set release their pilot slots
      std::vector<int> kept;
      kept.reserve(cl.members.size());
      for (int sat : cl.members) {
        if (std::binary_search(now_visible.begin(), now_visible.end(), sat)) {
          kept.push_back(sat);
        } else {
          book_.release(sat, cl.pilot_index, user);
          events_.push_back({t_s, EventKind::Leave, user, sat});
        }
      }
      cl.members = std::move(kept);

      // newly visible satellites join when the pilot is free there
      const std::vector<int>& prev = prev_visible_[user];
      for (int sat : now_visible) {
        if (std::binary_search(prev.begin(), prev.end(), sat)) continue;
        if (cl.is_member(sat)) continue;
        if (book_.is_free(sat, cl.pilot_index)) {
          book_.occupy(sat, cl.pilot_index, user);
          cl.members.insert(
              std::upper_bound(cl.members.begin(), cl.members.end(), sat),
              sat);
          events_.push_back({t_s, EventKind::Join, user, sat});
        }
      }
    }
    // Full cooperation keeps every satellite; non-cooperative keeps only the
    // reference satellite. Both only react to reference loss above.

    prev_visible_[user] = now_visible;
  }
}

CoverageOutcome measure_coverage(const std::vector<Satellite>& sats,
                                 const std::vector<GroundUser>& users,
                                 const GeometryConfig& cfg,
                                 const ScoreProvider& score_provider,
                                 int tau_p, double t0_s, double epoch_step_s,
                                 double horizon_s) {
  if (epoch_step_s <= 0.0)
    throw std::invalid_argument("epoch step must be positive");
  const int num_users = static_cast<int>(users.size());
  CoverageOutcome out;
  out.covered_at_start.assign(num_users, false);
  out.coverage_s.assign(num_users, std::numeric_limits<double>::quiet_NaN());
  out.formation_service_s.assign(num_users,
                                 std::numeric_limits<double>::quiet_NaN());

  ClusterController ctl(ClusterPolicy::UserCentric, tau_p, num_users,
                        static_cast<int>(sats.size()));
  ConstellationSnapshot snap = make_snapshot(sats, users, t0_s, cfg);
  ctl.form(snap, score_provider(snap), t0_s);

  const double pass_horizon = orbital_period_s(cfg.altitude_m);
  for (int n = 0; n < num_users; ++n) {
    const ServingCluster& cl = ctl.clusters()[n];
    if (!cl.covered()) continue;
    out.covered_at_start[n] = true;
    out.formation_service_s[n] =
        service_time_s(sats[cl.rsap_id], snap.user_pos[n], t0_s,
                       cfg.min_elevation_deg, pass_horizon);
    out.size_samples.push_back({t0_s, n, static_cast<int>(cl.members.size())});
  }

  std::vector<bool> done(num_users, false);
  std::size_t scanned = ctl.events().size();
  for (double t = t0_s + epoch_step_s; t <= t0_s + horizon_s + 1e-9;
       t += epoch_step_s) {
    snap = make_snapshot(sats, users, t, cfg);
    ctl.update(snap, score_provider(snap), t);
    for (; scanned < ctl.events().size(); ++scanned) {
      const ClusterEvent& ev = ctl.events()[scanned];
      if (ev.kind == EventKind::Handover && out.covered_at_start[ev.user_id] &&
          !done[ev.user_id]) {
        out.coverage_s[ev.user_id] = ev.time_s - t0_s;
        done[ev.user_id] = true;
      }
    }
    for (int n = 0; n < num_users; ++n) {
      const ServingCluster& cl = ctl.clusters()[n];
      if (cl.covered())
        out.size_samples.push_back(
            {t, n, static_cast<int>(cl.members.size())});
    }
  }
  for (int n = 0; n < num_users; ++n)
    if (out.covered_at_start[n] && !done[n]) out.coverage_s[n] = horizon_s;

  out.events = ctl.events();
  return out;
}

}  // namespace leomimo
