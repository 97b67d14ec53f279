// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "leomimo/geometry.hpp"
#include "leomimo/rng.hpp"

namespace leomimo {

/// Circular-orbit elements; the phase angle locates the satellite along the
/// orbit at t = 0.
struct OrbitElements {
  double altitude_m = 600e3;
  double inclination_deg = 53.0;
  double raan_deg = 0.0;
  double phase_deg = 0.0;
};

struct Satellite {
  int id = 0;
  OrbitElements orbit;
};

struct GroundUser {
  int id = 0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

enum class ConstellationScheme { WalkerDelta, UniformShell };
enum class PointingMode { Nadir, RegionCenter };

struct UserRegion {
  double center_lat = 40.0;   // degrees
  double center_lon = -100.0; // degrees
  double radius_m = 500e3;
};

struct GeometryConfig {
  ConstellationScheme scheme = ConstellationScheme::WalkerDelta;
  int num_satellites = 100;
  int num_planes = 0;  // 0 -> round(sqrt(num_satellites))
  int num_users = 10;
  double altitude_m = 600e3;
  double inclination_deg = 53.0;
  double min_elevation_deg = 0.0;
  PointingMode pointing = PointingMode::Nadir;
  UserRegion user_region;

  int planes() const;
};

double orbital_period_s(double altitude_m);

/// Position on the circular orbit at time t, Earth-centered Cartesian meters.
/// Deterministic and total in (satellite, t).
Vec3 propagate(const Satellite& sat, double t_s);

/// Walker-delta layout (or uniform-random shell when the scheme says so; the
/// rng is only consumed in that case).
std::vector<Satellite> build_constellation(const GeometryConfig& cfg, Rng& rng);

/// Users dropped uniformly by area inside the configured spherical cap.
std::vector<GroundUser> drop_users(const GeometryConfig& cfg, Rng& rng);

/// Time-stamped geometry between every user and every satellite. Immutable
/// once built; all per-link quantities are row-major [user][satellite].
struct ConstellationSnapshot {
  double time_s = 0.0;
  int num_users = 0;
  int num_sats = 0;
  std::vector<Vec3> sat_pos;
  std::vector<Vec3> user_pos;
  std::vector<double> range_m;        // N*M
  std::vector<double> elevation_deg;  // N*M
  std::vector<double> boresight_rad;  // N*M, off-axis angle at the satellite
  std::vector<std::vector<int>> visible;  // per user, ascending satellite ids

  double range(int n, int m) const { return range_m[n * num_sats + m]; }
  double elevation(int n, int m) const { return elevation_deg[n * num_sats + m]; }
  double boresight(int n, int m) const { return boresight_rad[n * num_sats + m]; }
};

ConstellationSnapshot make_snapshot(const std::vector<Satellite>& sats,
                                    const std::vector<GroundUser>& users,
                                    double t_s, const GeometryConfig& cfg);

/// Satellites at or above the elevation threshold for one user, ascending ids.
std::vector<int> visible_set(const ConstellationSnapshot& snap, int user,
                             double min_elevation_deg);

/// Remaining time until the satellite's elevation first drops below the
/// threshold, found by coarse stepping plus bisection to <= 0.1 s. Throws if
/// the satellite is not visible at t0. Returns horizon_s when the satellite
/// never sets within the horizon.
double service_time_s(const Satellite& sat, const Vec3& user_pos, double t0_s,
                      double min_elevation_deg, double horizon_s);

/// Signal timing offsets of each cluster member relative to the reference
/// satellite: dt_k = (r_k - r_ref) / c. Exactly zero for the reference itself.
std::vector<double> timing_offsets_s(const std::vector<double>& member_ranges_m,
                                     int ref_index);

}  // namespace leomimo
