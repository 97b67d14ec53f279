// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <map>
#include <optional>
#include <vector>

namespace leomimo {

/// Book of tau_p mutually orthogonal pilot sequences (scaled DFT columns,
/// ||seq||^2 = tau_p) plus the per-satellite occupancy map and the user ->
/// pilot assignment. Mutated only by the single-threaded clustering loop.
class PilotBook {
 public:
  explicit PilotBook(int tau_p);

  int tau_p() const { return tau_p_; }
  const arma::cx_mat& sequences() const { return sequences_; }
  arma::cx_vec sequence(int pilot) const { return sequences_.col(pilot); }

  /// Lowest pilot index free at the given satellite, assigned to the user and
  /// occupied there. nullopt means every index is taken (serving denied).
  std::optional<int> assign(int user, int sat);

  /// Marks the pilot occupied at a satellite. Throws if another user holds it.
  void occupy(int sat, int pilot, int user);
  /// occupy() that reports instead of throwing when the slot is taken.
  bool try_occupy(int sat, int pilot, int user);
  void release(int sat, int pilot, int user);
  bool is_free(int sat, int pilot) const;

  std::optional<int> assignment(int user) const;
  const std::map<int, int>& assignments() const { return assignment_; }
  /// Forces a pilot onto a user without touching occupancy (full-cooperation
  /// baseline reuse when users outnumber pilots).
  void set_assignment(int user, int pilot);
  void unassign(int user);

  /// Users sharing this user's pilot, ascending ids, including the user.
  std::vector<int> co_pilot_set(int user) const;

  /// occupant user id, if any
  std::optional<int> occupant(int sat, int pilot) const;

 private:
  int tau_p_;
  arma::cx_mat sequences_;
  std::map<int, int> assignment_;                // user -> pilot
  std::map<int, std::map<int, int>> occupancy_;  // sat -> pilot -> user
};

}  // namespace leomimo
