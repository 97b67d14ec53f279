// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leomimo {

inline constexpr double kEarthRadiusM = 6371e3;       // spherical Earth
inline constexpr double kMuEarthM3S2 = 3.986004418e14;
inline constexpr double kSpeedOfLightMps = 299792458.0;

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
  return a * (1.0 / n);
}

// Angle between two directions, stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

// Geodetic (spherical Earth) to Earth-centered Cartesian, meters.
inline Vec3 geodetic_to_ecef(double lat_deg, double lon_deg, double alt_m) {
  const double lat = deg2rad(lat_deg);
  const double lon = deg2rad(lon_deg);
  const double r = kEarthRadiusM + alt_m;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
          r * std::sin(lat)};
}

// Elevation of the satellite above the local horizon plane at the user,
// degrees in [-90, 90]. The local vertical is the radial direction
// (spherical Earth).
inline double elevation_angle_deg(const Vec3& sat_pos, const Vec3& user_pos) {
  const Vec3 rel = sat_pos - user_pos;
  const double d = norm(rel);
  if (d == 0.0)
    throw std::invalid_argument("satellite and user positions coincide");
  const Vec3 up = normalized(user_pos);
  double s = dot(up, rel) / d;
  s = std::clamp(s, -1.0, 1.0);
  return rad2deg(std::asin(s));
}

// Off-axis angle between the antenna pointing direction (satellite -> target)
// and the satellite -> user direction, radians in [0, pi].
inline double boresight_angle_rad(const Vec3& sat_pos, const Vec3& user_pos,
                                  const Vec3& target_pos) {
  const Vec3 to_user = user_pos - sat_pos;
  const Vec3 to_target = target_pos - sat_pos;
  if (norm(to_user) == 0.0 || norm(to_target) == 0.0)
    throw std::invalid_argument("degenerate boresight geometry");
  return angle_between(to_target, to_user);
}

}  // namespace leomimo
