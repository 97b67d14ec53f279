// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leomimo/constellation.hpp"
#include "leomimo/pilots.hpp"

namespace leomimo {

enum class ClusterPolicy { UserCentric, FullCooperation, NonCooperative };
enum class RsapCriterion { BestChannel, MaxServiceTime };
enum class EventKind { Join, Leave, Handover, Deny, NoCoverage };

const char* to_string(ClusterPolicy p);
const char* to_string(RsapCriterion c);
const char* to_string(EventKind k);

struct ClusterEvent {
  double time_s = 0.0;
  EventKind kind = EventKind::Join;
  int user_id = -1;
  int satellite_id = -1;  // -1 when no satellite applies
};

/// One user's serving cluster. Uncovered users have rsap_id < 0.
struct ServingCluster {
  int user_id = -1;
  int rsap_id = -1;
  std::vector<int> members;  // ascending satellite ids, contains rsap_id
  int pilot_index = -1;
  double formed_at_s = 0.0;

  bool covered() const { return rsap_id >= 0; }
  bool is_member(int sat) const;
};

/// Score of satellite m for user n: the channel gain under BestChannel, the
/// remaining service time under MaxServiceTime.
using ScoreFn = std::function<double(int user, int sat)>;

/// argmax of the score over the candidates; ties broken by lowest satellite
/// id. nullopt when there are no candidates (no coverage).
std::optional<int> select_rsap(const std::vector<int>& candidates, int user,
                               const ScoreFn& score);

/// Serving-cluster state machine: initial access, per-epoch update with
/// member joins/leaves, and handover when the reference satellite sets.
/// Single-threaded by design; it owns the pilot book.
class ClusterController {
 public:
  ClusterController(ClusterPolicy policy, int tau_p, int num_users,
                    int num_sats);

  /// Initial access for every user in ascending id order.
  void form(const ConstellationSnapshot& snap, const ScoreFn& score,
            double t_s);

  /// Per-epoch update: newly visible satellites join when the user's pilot is
  /// free there, members that left the visibility set are released, and a
  /// reference-satellite loss triggers handover plus re-access.
  void update(const ConstellationSnapshot& snap, const ScoreFn& score,
              double t_s);

  const std::vector<ServingCluster>& clusters() const { return clusters_; }
  const std::vector<ClusterEvent>& events() const { return events_; }
  const PilotBook& pilots() const { return book_; }
  ClusterPolicy policy() const { return policy_; }

 private:
  bool attempt_access(int user, const ConstellationSnapshot& snap,
                      const ScoreFn& score, double t_s);
  void teardown(int user);

  ClusterPolicy policy_;
  int num_sats_;
  PilotBook book_;
  std::vector<ServingCluster> clusters_;
  std::vector<std::vector<int>> prev_visible_;
  std::vector<ClusterEvent> events_;
};

struct ClusterSizeSample {
  double time_s = 0.0;
  int user_id = -1;
  int size = 0;
};

/// Coverage measurement: steps a user-centric controller from t0 until the
/// horizon and reports, per user, the time from initial access to the first
/// handover (truncated at the horizon). Also reports the remaining service
/// time of the formation-time reference satellite for cross-checking.
struct CoverageOutcome {
  std::vector<bool> covered_at_start;
  std::vector<double> coverage_s;              // valid where covered_at_start
  std::vector<double> formation_service_s;     // zeta of the formation RSAP
  std::vector<ClusterEvent> events;
  std::vector<ClusterSizeSample> size_samples;
};

using ScoreProvider = std::function<ScoreFn(const ConstellationSnapshot&)>;

CoverageOutcome measure_coverage(const std::vector<Satellite>& sats,
                                 const std::vector<GroundUser>& users,
                                 const GeometryConfig& cfg,
                                 const ScoreProvider& score_provider,
                                 int tau_p, double t0_s, double epoch_step_s,
                                 double horizon_s);

}  // namespace leomimo
