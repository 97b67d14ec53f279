// SPDX-License-Identifier: Apache-2.0
#include "leomimo/pilots.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leomimo {

PilotBook::PilotBook(int tau_p) : tau_p_(tau_p) {
  if (tau_p < 1) throw std::invalid_argument("tau_p must be >= 1");
  sequences_.set_size(tau_p, tau_p);
  for (int k = 0; k < tau_p; ++k)
    for (int t = 0; t < tau_p; ++t)
      sequences_(t, k) =
          std::polar(1.0, -2.0 * std::numbers::pi * k * t / tau_p);
}

std::optional<int> PilotBook::assign(int user, int sat) {
  if (assignment_.contains(user))
    throw std::logic_error("user already holds a pilot");
  for (int p = 0; p < tau_p_; ++p) {
    if (is_free(sat, p)) {
      assignment_[user] = p;
      occupy(sat, p, user);
      return p;
    }
  }
  return std::nullopt;
}

void PilotBook::occupy(int sat, int pilot, int user) {
  auto& slots = occupancy_[sat];
  auto [it, inserted] = slots.try_emplace(pilot, user);
  if (!inserted && it->second != user)
    throw std::logic_error("pilot already occupied at satellite");
}

bool PilotBook::try_occupy(int sat, int pilot, int user) {
  if (!is_free(sat, pilot)) return false;
  occupancy_[sat][pilot] = user;
  return true;
}

void PilotBook::release(int sat, int pilot, int user) {
  auto sat_it = occupancy_.find(sat);
  if (sat_it == occupancy_.end()) return;
  auto it = sat_it->second.find(pilot);
  if (it != sat_it->second.end() && it->second == user)
    sat_it->second.erase(it);
}

bool PilotBook::is_free(int sat, int pilot) const {
  auto sat_it = occupancy_.find(sat);
  if (sat_it == occupancy_.end()) return true;
  return !sat_it->second.contains(pilot);
}

std::optional<int> PilotBook::assignment(int user) const {
  auto it = assignment_.find(user);
  if (it == assignment_.end()) return std::nullopt;
  return it->second;
}

void PilotBook::set_assignment(int user, int pilot) {
  if (pilot < 0 || pilot >= tau_p_)
    throw std::invalid_argument("pilot index out of range");
  assignment_[user] = pilot;
}

void PilotBook::unassign(int user) { assignment_.erase(user); }

std::vector<int> PilotBook::co_pilot_set(int user) const {
  auto it = assignment_.find(user);
  if (it == assignment_.end())
    throw std::invalid_argument("user has no pilot assigned");
  std::vector<int> out;
  for (const auto& [u, p] : assignment_)
    if (p == it->second) out.push_back(u);
  return out;
}

std::optional<int> PilotBook::occupant(int sat, int pilot) const {
  auto sat_it = occupancy_.find(sat);
  if (sat_it == occupancy_.end()) return std::nullopt;
  auto it = sat_it->second.find(pilot);
  if (it == sat_it->second.end()) return std::nullopt;
  return it->second;
}

}  // namespace leomimo
