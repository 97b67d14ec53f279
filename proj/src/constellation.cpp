// SPDX-License-Identifier: Apache-2.0
#include "leomimo/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace leomimo {

int GeometryConfig::planes() const {
  if (num_planes > 0) return num_planes;
  return std::max(1, static_cast<int>(std::lround(std::sqrt(
                         static_cast<double>(num_satellites)))));
}

double orbital_period_s(double altitude_m) {
  const double a = kEarthRadiusM + altitude_m;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kMuEarthM3S2);
}

Vec3 propagate(const Satellite& sat, double t_s) {
  const double a = kEarthRadiusM + sat.orbit.altitude_m;
  const double n = std::sqrt(kMuEarthM3S2 / (a * a * a));  // rad/s
  const double u = deg2rad(sat.orbit.phase_deg) + n * t_s;
  const double raan = deg2rad(sat.orbit.raan_deg);
  const double inc = deg2rad(sat.orbit.inclination_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);
  return {a * (cu * co - su * ci * so), a * (cu * so + su * ci * co),
          a * su * si};
}

std::vector<Satellite> build_constellation(const GeometryConfig& cfg, Rng& rng) {
  if (cfg.num_satellites < 1)
    throw std::invalid_argument("num_satellites must be >= 1");
  std::vector<Satellite> sats;
  sats.reserve(cfg.num_satellites);
  if (cfg.scheme == ConstellationScheme::WalkerDelta) {
    const int planes = cfg.planes();
    const int per_plane = (cfg.num_satellites + planes - 1) / planes;
    for (int id = 0; id < cfg.num_satellites; ++id) {
      const int plane = id / per_plane;
      const int slot = id % per_plane;
      Satellite s;
      s.id = id;
      s.orbit.altitude_m = cfg.altitude_m;
      s.orbit.inclination_deg = cfg.inclination_deg;
      s.orbit.raan_deg = 360.0 * plane / planes;
      // in-plane spacing plus the standard inter-plane phasing step
      s.orbit.phase_deg = 360.0 * slot / per_plane +
                          360.0 * plane / cfg.num_satellites;
      sats.push_back(s);
    }
  } else {
    // Orbit normals drawn isotropically; time-averaged positions are uniform
    // on the shell.
    for (int id = 0; id < cfg.num_satellites; ++id) {
      Satellite s;
      s.id = id;
      s.orbit.altitude_m = cfg.altitude_m;
      s.orbit.inclination_deg = rad2deg(std::acos(rng.uniform(-1.0, 1.0)));
      s.orbit.raan_deg = rng.uniform(0.0, 360.0);
      s.orbit.phase_deg = rng.uniform(0.0, 360.0);
      sats.push_back(s);
    }
  }
  return sats;
}

std::vector<GroundUser> drop_users(const GeometryConfig& cfg, Rng& rng) {
  std::vector<GroundUser> users;
  users.reserve(cfg.num_users);
  const double lat1 = deg2rad(cfg.user_region.center_lat);
  const double lon1 = deg2rad(cfg.user_region.center_lon);
  const double sigma_max = cfg.user_region.radius_m / kEarthRadiusM;
  for (int id = 0; id < cfg.num_users; ++id) {
    // uniform by area over the spherical cap
    const double cos_sigma = rng.uniform(std::cos(sigma_max), 1.0);
    const double sigma = std::acos(std::clamp(cos_sigma, -1.0, 1.0));
    const double bearing = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double sin_lat2 = std::sin(lat1) * std::cos(sigma) +
                            std::cos(lat1) * std::sin(sigma) * std::cos(bearing);
    const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
    const double lon2 =
        lon1 + std::atan2(std::sin(bearing) * std::sin(sigma) * std::cos(lat1),
                          std::cos(sigma) - std::sin(lat1) * sin_lat2);
    GroundUser u;
    u.id = id;
    u.lat_deg = rad2deg(lat2);
    u.lon_deg = rad2deg(lon2);
    u.alt_m = 0.0;
    users.push_back(u);
  }
  return users;
}

ConstellationSnapshot make_snapshot(const std::vector<Satellite>& sats,
                                    const std::vector<GroundUser>& users,
                                    double t_s, const GeometryConfig& cfg) {
  ConstellationSnapshot snap;
  snap.time_s = t_s;
  snap.num_users = static_cast<int>(users.size());
  snap.num_sats = static_cast<int>(sats.size());
  snap.sat_pos.reserve(sats.size());
  for (const auto& s : sats) snap.sat_pos.push_back(propagate(s, t_s));
  snap.user_pos.reserve(users.size());
  for (const auto& u : users)
    snap.user_pos.push_back(geodetic_to_ecef(u.lat_deg, u.lon_deg, u.alt_m));

  const Vec3 region_center = geodetic_to_ecef(cfg.user_region.center_lat,
                                              cfg.user_region.center_lon, 0.0);
  const std::size_t links = users.size() * sats.size();
  snap.range_m.resize(links);
  snap.elevation_deg.resize(links);
  snap.boresight_rad.resize(links);
  snap.visible.resize(users.size());
  for (int n = 0; n < snap.num_users; ++n) {
    for (int m = 0; m < snap.num_sats; ++m) {
      const std::size_t k = static_cast<std::size_t>(n) * snap.num_sats + m;
      const Vec3& sp = snap.sat_pos[m];
      const Vec3& up = snap.user_pos[n];
      snap.range_m[k] = norm(sp - up);
      snap.elevation_deg[k] = elevation_angle_deg(sp, up);
      const Vec3 target = cfg.pointing == PointingMode::Nadir
                              ? Vec3{0.0, 0.0, 0.0}
                              : region_center;
      snap.boresight_rad[k] = boresight_angle_rad(sp, up, target);
      if (snap.elevation_deg[k] >= cfg.min_elevation_deg)
        snap.visible[n].push_back(m);
    }
  }
  return snap;
}

std::vector<int> visible_set(const ConstellationSnapshot& snap, int user,
                             double min_elevation_deg) {
  std::vector<int> out;
  for (int m = 0; m < snap.num_sats; ++m)
    if (snap.elevation(user, m) >= min_elevation_deg) out.push_back(m);
  return out;
}

double service_time_s(const Satellite& sat, const Vec3& user_pos, double t0_s,
                      double min_elevation_deg, double horizon_s) {
  auto elev = [&](double t) {
    return elevation_angle_deg(propagate(sat, t), user_pos);
  };
  if (elev(t0_s) < min_elevation_deg)
    throw std::invalid_argument("satellite not visible at t0");
  const double coarse = 10.0;
  double lo = t0_s;
  double hi = t0_s;
  bool crossed = false;
  while (hi - t0_s < horizon_s) {
    hi = std::min(hi + coarse, t0_s + horizon_s);
    if (elev(hi) < min_elevation_deg) {
      crossed = true;
      break;
    }
    lo = hi;
  }
  if (!crossed) return horizon_s;
  while (hi - lo > 0.05) {
    const double mid = 0.5 * (lo + hi);
    if (elev(mid) < min_elevation_deg)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi) - t0_s;
}

std::vector<double> timing_offsets_s(const std::vector<double>& member_ranges_m,
                                     int ref_index) {
  if (ref_index < 0 || ref_index >= static_cast<int>(member_ranges_m.size()))
    throw std::invalid_argument("reference satellite not in member set");
  std::vector<double> dt(member_ranges_m.size());
  const double r_ref = member_ranges_m[ref_index];
  for (std::size_t k = 0; k < member_ranges_m.size(); ++k)
    dt[k] = (member_ranges_m[k] - r_ref) / kSpeedOfLightMps;
  dt[ref_index] = 0.0;
  return dt;
}

}  // namespace leomimo
