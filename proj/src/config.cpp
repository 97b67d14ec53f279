// SPDX-License-Identifier: Apache-2.0
#include "leomimo/config.hpp"

#include <fstream>
#include <set>

namespace leomimo {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(const json& root) : root_(root) {}

  const json* section(const char* name) {
    if (!root_.contains(name)) return nullptr;
    if (!root_[name].is_object()) {
      errors_.push_back(std::string(name) + ": must be an object");
      return nullptr;
    }
    return &root_[name];
  }

  template <typename T>
  void get(const json* sec, const char* sec_name, const char* key, T& out,
           bool required = false) {
    if (sec == nullptr) return;
    mark_known(sec_name, key);
    if (!sec->contains(key)) {
      if (required)
        errors_.push_back(field(sec_name, key) + ": required key missing");
      return;
    }
    try {
      out = sec->at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(field(sec_name, key) + ": wrong type");
    }
  }

  void check(bool ok, const char* sec, const char* key, const char* what) {
    if (!ok) errors_.push_back(field(sec, key) + ": " + what);
  }

  void reject_unknown(const json* sec, const char* sec_name) {
    if (sec == nullptr) return;
    for (auto it = sec->begin(); it != sec->end(); ++it)
      if (!known_.contains(field(sec_name, it.key().c_str())))
        errors_.push_back(field(sec_name, it.key().c_str()) + ": unknown key");
  }

  void reject_unknown_sections(const std::set<std::string>& sections) {
    for (auto it = root_.begin(); it != root_.end(); ++it)
      if (!sections.contains(it.key()))
        errors_.push_back(it.key() + ": unknown section");
  }

  void add_error(std::string e) { errors_.push_back(std::move(e)); }

  void accept_key(const char* sec, const char* key) { mark_known(sec, key); }

  void finish() const {
    if (errors_.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errors_) msg += "\n  - " + e;
    throw ConfigError(msg, errors_);
  }

 private:
  static std::string field(const char* sec, const char* key) {
    return std::string(sec) + "." + key;
  }
  void mark_known(const char* sec, const char* key) {
    known_.insert(field(sec, key));
  }

  const json& root_;
  std::set<std::string> known_;
  std::vector<std::string> errors_;
};

template <typename Enum>
bool parse_enum_list(const std::vector<std::string>& names,
                     const std::vector<std::pair<std::string, Enum>>& table,
                     std::vector<Enum>& out) {
  out.clear();
  for (const auto& name : names) {
    bool found = false;
    for (const auto& [key, value] : table)
      if (key == name) {
        out.push_back(value);
        found = true;
        break;
      }
    if (!found) return false;
  }
  return !out.empty();
}

const std::vector<std::pair<std::string, ClusterPolicy>> kPolicyNames = {
    {"uc", ClusterPolicy::UserCentric},
    {"fc", ClusterPolicy::FullCooperation},
    {"nct", ClusterPolicy::NonCooperative}};
const std::vector<std::pair<std::string, RsapCriterion>> kCriterionNames = {
    {"best_channel", RsapCriterion::BestChannel},
    {"max_service_time", RsapCriterion::MaxServiceTime}};
const std::vector<std::pair<std::string, PrecoderMode>> kModeNames = {
    {"phase_aware", PrecoderMode::PhaseAware},
    {"asynchronous", PrecoderMode::Asynchronous}};

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object())
    throw ConfigError("invalid configuration: root must be an object",
                      {"root"});
  ExperimentConfig cfg;
  Parser p(j);

  const json* geo = p.section("geometry");
  std::string scheme = "walker_delta";
  std::string pointing = "nadir";
  if (geo) {
    p.get(geo, "geometry", "scheme", scheme);
    p.get(geo, "geometry", "num_satellites", cfg.geometry.num_satellites);
    p.get(geo, "geometry", "num_planes", cfg.geometry.num_planes);
    p.get(geo, "geometry", "num_users", cfg.geometry.num_users);
    p.get(geo, "geometry", "altitude_m", cfg.geometry.altitude_m);
    p.get(geo, "geometry", "inclination_deg", cfg.geometry.inclination_deg);
    p.get(geo, "geometry", "min_elevation_deg",
          cfg.geometry.min_elevation_deg);
    p.get(geo, "geometry", "pointing", pointing);
    p.accept_key("geometry", "user_region");
    if (geo->contains("user_region")) {
      const json& ur = (*geo)["user_region"];
      auto get_ur = [&](const char* key, double& out) {
        if (ur.contains(key)) {
          try {
            out = ur.at(key).get<double>();
          } catch (const json::exception&) {
            p.add_error(std::string("geometry.user_region.") + key +
                        ": wrong type");
          }
        }
      };
      get_ur("center_lat", cfg.geometry.user_region.center_lat);
      get_ur("center_lon", cfg.geometry.user_region.center_lon);
      get_ur("radius_m", cfg.geometry.user_region.radius_m);
      for (auto it = ur.begin(); it != ur.end(); ++it)
        if (std::string k = it.key();
            k != "center_lat" && k != "center_lon" && k != "radius_m")
          p.add_error("geometry.user_region." + k + ": unknown key");
    }
  }
  if (scheme == "walker_delta")
    cfg.geometry.scheme = ConstellationScheme::WalkerDelta;
  else if (scheme == "uniform_random_sphere")
    cfg.geometry.scheme = ConstellationScheme::UniformShell;
  else
    p.add_error("geometry.scheme: must be walker_delta or "
                "uniform_random_sphere");
  if (pointing == "nadir")
    cfg.geometry.pointing = PointingMode::Nadir;
  else if (pointing == "region_center")
    cfg.geometry.pointing = PointingMode::RegionCenter;
  else
    p.add_error("geometry.pointing: must be nadir or region_center");

  p.check(cfg.geometry.num_satellites >= 1, "geometry", "num_satellites",
          "must be >= 1");
  p.check(cfg.geometry.num_users >= 1, "geometry", "num_users", "must be >= 1");
  p.check(cfg.geometry.altitude_m > 0, "geometry", "altitude_m",
          "must be > 0");
  p.check(cfg.geometry.inclination_deg >= 0 &&
              cfg.geometry.inclination_deg <= 180,
          "geometry", "inclination_deg", "must be in [0, 180]");
  p.check(cfg.geometry.min_elevation_deg >= 0 &&
              cfg.geometry.min_elevation_deg < 90,
          "geometry", "min_elevation_deg", "must be in [0, 90)");
  p.check(std::abs(cfg.geometry.user_region.center_lat) <= 90, "geometry",
          "user_region", "center_lat must be in [-90, 90]");
  p.check(cfg.geometry.user_region.radius_m >= 0, "geometry", "user_region",
          "radius_m must be >= 0");

  const json* radio = p.section("radio");
  if (radio) {
    p.get(radio, "radio", "frequency_mhz", cfg.radio.frequency_mhz);
    p.get(radio, "radio", "bandwidth_hz", cfg.radio.bandwidth_hz);
    p.get(radio, "radio", "antennas_per_sat", cfg.radio.antennas_per_sat);
    p.get(radio, "radio", "antenna_spacing_wavelengths",
          cfg.radio.antenna_spacing_wavelengths);
    p.get(radio, "radio", "rician_k", cfg.radio.rician_k);
    p.get(radio, "radio", "shadowing_var_db", cfg.radio.shadowing_var_db);
    p.get(radio, "radio", "other_losses_db", cfg.radio.other_losses_db);
    p.get(radio, "radio", "sat_gain_dbi", cfg.radio.sat_gain_dbi);
    p.get(radio, "radio", "user_gain_db", cfg.radio.user_gain_db);
    p.get(radio, "radio", "antenna_aperture_wavelengths",
          cfg.radio.antenna_aperture_wavelengths);
    p.get(radio, "radio", "noise_psd_dbm_hz", cfg.radio.noise_psd_dbm_hz);
    p.get(radio, "radio", "pilot_power_dbw", cfg.radio.pilot_power_dbw);
    p.get(radio, "radio", "max_tx_power_dbw", cfg.radio.max_tx_power_dbw);
  }
  p.check(cfg.radio.frequency_mhz > 0, "radio", "frequency_mhz", "must be > 0");
  p.check(cfg.radio.bandwidth_hz > 0, "radio", "bandwidth_hz", "must be > 0");
  p.check(cfg.radio.antennas_per_sat >= 1 && cfg.radio.antennas_per_sat <= 16,
          "radio", "antennas_per_sat", "must be in [1, 16]");
  p.check(cfg.radio.rician_k >= 0, "radio", "rician_k", "must be >= 0");
  p.check(cfg.radio.shadowing_var_db >= 0, "radio", "shadowing_var_db",
          "must be >= 0");
  p.check(cfg.radio.antenna_aperture_wavelengths > 0, "radio",
          "antenna_aperture_wavelengths", "must be > 0");

  const json* pilot = p.section("pilot");
  if (pilot) {
    p.get(pilot, "pilot", "tau_p", cfg.pilot.tau_p);
    p.get(pilot, "pilot", "tau_c", cfg.pilot.tau_c);
  }
  p.check(cfg.pilot.tau_p >= 1, "pilot", "tau_p", "must be >= 1");
  p.check(cfg.pilot.tau_c > cfg.pilot.tau_p, "pilot", "tau_c",
          "must exceed tau_p");

  const json* policy = p.section("policy");
  std::vector<std::string> policies = {"uc"};
  std::vector<std::string> criteria = {"best_channel"};
  std::vector<std::string> modes = {"phase_aware"};
  std::string csi = "lmmse";
  std::string power = "equal_split";
  if (policy) {
    p.get(policy, "policy", "cluster_policies", policies);
    p.get(policy, "policy", "rsap_criteria", criteria);
    p.get(policy, "policy", "precoder_modes", modes);
    p.get(policy, "policy", "csi", csi);
    p.get(policy, "policy", "power", power);
  }
  if (!parse_enum_list(policies, kPolicyNames, cfg.policy.cluster_policies))
    p.add_error("policy.cluster_policies: values must be uc, fc or nct");
  if (!parse_enum_list(criteria, kCriterionNames, cfg.policy.rsap_criteria))
    p.add_error(
        "policy.rsap_criteria: values must be best_channel or "
        "max_service_time");
  if (!parse_enum_list(modes, kModeNames, cfg.policy.precoder_modes))
    p.add_error(
        "policy.precoder_modes: values must be phase_aware or asynchronous");
  if (csi == "lmmse")
    cfg.policy.csi = CsiMode::Lmmse;
  else if (csi == "perfect")
    cfg.policy.csi = CsiMode::Perfect;
  else
    p.add_error("policy.csi: must be lmmse or perfect");
  if (power == "equal_split")
    cfg.policy.power = PowerMode::EqualSplit;
  else if (power == "uniform_coefficient")
    cfg.policy.power = PowerMode::UniformCoefficient;
  else
    p.add_error("policy.power: must be equal_split or uniform_coefficient");

  const json* mc = p.section("monte_carlo");
  if (mc == nullptr) {
    p.add_error("monte_carlo: section is required (seed has no default)");
  } else {
    p.get(mc, "monte_carlo", "num_drops", cfg.monte_carlo.num_drops);
    p.get(mc, "monte_carlo", "trials_per_drop",
          cfg.monte_carlo.trials_per_drop);
    p.get(mc, "monte_carlo", "epoch_step_s", cfg.monte_carlo.epoch_step_s);
    p.get(mc, "monte_carlo", "horizon_s", cfg.monte_carlo.horizon_s);
    p.get(mc, "monte_carlo", "seed", cfg.monte_carlo.seed, /*required=*/true);
    p.get(mc, "monte_carlo", "measure_coverage",
          cfg.monte_carlo.measure_coverage);
  }
  p.check(cfg.monte_carlo.num_drops >= 0, "monte_carlo", "num_drops",
          "must be >= 0");
  p.check(cfg.monte_carlo.trials_per_drop >= 1, "monte_carlo",
          "trials_per_drop", "must be >= 1");
  p.check(cfg.monte_carlo.epoch_step_s > 0, "monte_carlo", "epoch_step_s",
          "must be > 0");
  p.check(cfg.monte_carlo.horizon_s > 0, "monte_carlo", "horizon_s",
          "must be > 0");

  const json* output = p.section("output");
  if (output) {
    p.get(output, "output", "directory", cfg.output.directory);
    p.get(output, "output", "formats", cfg.output.formats);
  }

  p.reject_unknown(geo, "geometry");
  p.reject_unknown(radio, "radio");
  p.reject_unknown(pilot, "pilot");
  p.reject_unknown(policy, "policy");
  p.reject_unknown(mc, "monte_carlo");
  p.reject_unknown(output, "output");
  p.reject_unknown_sections(
      {"geometry", "radio", "pilot", "policy", "monte_carlo", "output"});
  p.finish();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path, {path});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()),
                      {path});
  }
  return parse_config(j);
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["geometry"] = {
      {"scheme", cfg.geometry.scheme == ConstellationScheme::WalkerDelta
                     ? "walker_delta"
                     : "uniform_random_sphere"},
      {"num_satellites", cfg.geometry.num_satellites},
      {"num_planes", cfg.geometry.planes()},
      {"num_users", cfg.geometry.num_users},
      {"altitude_m", cfg.geometry.altitude_m},
      {"inclination_deg", cfg.geometry.inclination_deg},
      {"min_elevation_deg", cfg.geometry.min_elevation_deg},
      {"pointing", cfg.geometry.pointing == PointingMode::Nadir
                       ? "nadir"
                       : "region_center"},
      {"user_region",
       {{"center_lat", cfg.geometry.user_region.center_lat},
        {"center_lon", cfg.geometry.user_region.center_lon},
        {"radius_m", cfg.geometry.user_region.radius_m}}}};
  j["radio"] = {{"frequency_mhz", cfg.radio.frequency_mhz},
                {"bandwidth_hz", cfg.radio.bandwidth_hz},
                {"antennas_per_sat", cfg.radio.antennas_per_sat},
                {"antenna_spacing_wavelengths",
                 cfg.radio.antenna_spacing_wavelengths},
                {"rician_k", cfg.radio.rician_k},
                {"shadowing_var_db", cfg.radio.shadowing_var_db},
                {"other_losses_db", cfg.radio.other_losses_db},
                {"sat_gain_dbi", cfg.radio.sat_gain_dbi},
                {"user_gain_db", cfg.radio.user_gain_db},
                {"antenna_aperture_wavelengths",
                 cfg.radio.antenna_aperture_wavelengths},
                {"noise_psd_dbm_hz", cfg.radio.noise_psd_dbm_hz},
                {"pilot_power_dbw", cfg.radio.pilot_power_dbw},
                {"max_tx_power_dbw", cfg.radio.max_tx_power_dbw}};
  j["pilot"] = {{"tau_p", cfg.pilot.tau_p}, {"tau_c", cfg.pilot.tau_c}};
  std::vector<std::string> policies, criteria, modes;
  for (auto v : cfg.policy.cluster_policies) policies.push_back(to_string(v));
  for (auto v : cfg.policy.rsap_criteria) criteria.push_back(to_string(v));
  for (auto v : cfg.policy.precoder_modes) modes.push_back(to_string(v));
  j["policy"] = {{"cluster_policies", policies},
                 {"rsap_criteria", criteria},
                 {"precoder_modes", modes},
                 {"csi", to_string(cfg.policy.csi)},
                 {"power", to_string(cfg.policy.power)}};
  j["monte_carlo"] = {{"num_drops", cfg.monte_carlo.num_drops},
                      {"trials_per_drop", cfg.monte_carlo.trials_per_drop},
                      {"epoch_step_s", cfg.monte_carlo.epoch_step_s},
                      {"horizon_s", cfg.monte_carlo.horizon_s},
                      {"seed", cfg.monte_carlo.seed},
                      {"measure_coverage", cfg.monte_carlo.measure_coverage}};
  j["output"] = {{"directory", cfg.output.directory},
                 {"formats", cfg.output.formats}};
  return j;
}

}  // namespace leomimo
