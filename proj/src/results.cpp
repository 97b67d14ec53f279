// SPDX-License-Identifier: Apache-2.0
#include "leomimo/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "leomimo/version.hpp"

namespace leomimo {

namespace {

ClusterPolicy policy_from(const std::string& s) {
  if (s == "uc") return ClusterPolicy::UserCentric;
  if (s == "fc") return ClusterPolicy::FullCooperation;
  if (s == "nct") return ClusterPolicy::NonCooperative;
  throw std::runtime_error("unknown policy in result file: " + s);
}

RsapCriterion criterion_from(const std::string& s) {
  if (s == "best_channel") return RsapCriterion::BestChannel;
  if (s == "max_service_time") return RsapCriterion::MaxServiceTime;
  throw std::runtime_error("unknown criterion in result file: " + s);
}

PrecoderMode mode_from(const std::string& s) {
  if (s == "phase_aware") return PrecoderMode::PhaseAware;
  if (s == "asynchronous") return PrecoderMode::Asynchronous;
  throw std::runtime_error("unknown precoder mode in result file: " + s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::pair<double, double>> summarize_cdf(
    std::vector<double> samples, int grid_points) {
  if (samples.empty())
    throw std::invalid_argument("cannot summarize an empty sample set");
  if (grid_points < 1)
    throw std::invalid_argument("grid must have at least one point");
  std::sort(samples.begin(), samples.end());
  const double lo = samples.front();
  const double hi = samples.back();
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(grid_points);
  const double n = static_cast<double>(samples.size());
  for (int i = 0; i < grid_points; ++i) {
    const double x = grid_points == 1
                         ? hi
                         : lo + (hi - lo) * i / (grid_points - 1);
    const auto it = std::upper_bound(samples.begin(), samples.end(), x);
    cdf.emplace_back(x, static_cast<double>(it - samples.begin()) / n);
  }
  cdf.back().second = 1.0;  // grid ends exactly at the maximum
  return cdf;
}

void write_result(const ExperimentResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    nlohmann::json manifest;
    manifest["artifact"] = {{"name", kProjectName}, {"version", kVersion}};
    manifest["config"] = result.config;
    manifest["files"] = {"se_samples.csv", "coverage_times.csv",
                         "cluster_sizes.csv", "events.jsonl", "summary.csv"};
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  {
    // the echoed config alone, directly reusable as a run input
    std::ofstream out(fs::path(dir) / "config_echo.json");
    out << result.config.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(dir) / "se_samples.csv");
    out << "drop,user,policy,criterion,mode,sinr,se,cluster_size,"
           "coherent_gain,bf_uncertainty,interference,noise_w,sinr_stderr,"
           "low_confidence\n";
    for (const auto& r : result.se_records) {
      out << r.drop << ',' << r.user << ',' << to_string(r.policy) << ','
          << to_string(r.criterion) << ',' << to_string(r.mode) << ','
          << format_double(r.sinr) << ',' << format_double(r.se) << ','
          << r.cluster_size << ',' << format_double(r.coherent_gain) << ','
          << format_double(r.bf_uncertainty) << ','
          << format_double(r.interference) << ',' << format_double(r.noise_w)
          << ',' << format_double(r.sinr_stderr) << ','
          << (r.low_confidence ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "coverage_times.csv");
    out << "drop,user,criterion,covered,coverage_s,formation_service_s\n";
    for (const auto& r : result.coverage_records)
      out << r.drop << ',' << r.user << ',' << to_string(r.criterion) << ','
          << (r.covered ? 1 : 0) << ',' << format_double(r.coverage_s) << ','
          << format_double(r.formation_service_s) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "cluster_sizes.csv");
    out << "drop,time_s,user,criterion,size\n";
    for (const auto& r : result.size_records)
      out << r.drop << ',' << format_double(r.time_s) << ',' << r.user << ','
          << to_string(r.criterion) << ',' << r.size << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "events.jsonl");
    for (const auto& r : result.events) {
      nlohmann::json j = {{"time", r.event.time_s},
                          {"kind", to_string(r.event.kind)},
                          {"user", r.event.user_id},
                          {"satellite", r.event.satellite_id},
                          {"drop", r.drop},
                          {"policy", to_string(r.policy)},
                          {"criterion", to_string(r.criterion)}};
      out << j.dump() << '\n';
    }
  }
  {
    // per-group summary over SE samples
    std::ofstream out(fs::path(dir) / "summary.csv");
    out << "policy,criterion,mode,samples,mean_se,median_se,mean_sinr,"
           "mean_cluster_size,coverage_fraction\n";
    std::map<std::string, std::vector<const SeRecord*>> groups;
    for (const auto& r : result.se_records) {
      const std::string key = std::string(to_string(r.policy)) + "," +
                              to_string(r.criterion) + "," + to_string(r.mode);
      groups[key].push_back(&r);
    }
    for (const auto& [key, rows] : groups) {
      std::vector<double> se, sinr, size;
      int covered = 0;
      for (const auto* r : rows) {
        se.push_back(r->se);
        sinr.push_back(r->sinr);
        size.push_back(r->cluster_size);
        if (r->cluster_size > 0) ++covered;
      }
      out << key << ',' << rows.size() << ',' << format_double(mean_of(se))
          << ',' << format_double(median_of(se)) << ','
          << format_double(mean_of(sinr)) << ','
          << format_double(mean_of(size)) << ','
          << format_double(rows.empty() ? 0.0
                                        : static_cast<double>(covered) /
                                              rows.size())
          << '\n';
    }
  }
}

std::vector<SeRecord> read_se_records(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "se_samples.csv");
  if (!in)
    throw std::runtime_error("cannot open se_samples.csv under " + dir);
  std::string line;
  std::getline(in, line);  // header
  std::vector<SeRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 14) throw std::runtime_error("malformed record: " + line);
    SeRecord r;
    r.drop = std::stoi(f[0]);
    r.user = std::stoi(f[1]);
    r.policy = policy_from(f[2]);
    r.criterion = criterion_from(f[3]);
    r.mode = mode_from(f[4]);
    r.sinr = std::stod(f[5]);
    r.se = std::stod(f[6]);
    r.cluster_size = std::stoi(f[7]);
    r.coherent_gain = std::stod(f[8]);
    r.bf_uncertainty = std::stod(f[9]);
    r.interference = std::stod(f[10]);
    r.noise_w = std::stod(f[11]);
    r.sinr_stderr = std::stod(f[12]);
    r.low_confidence = f[13] == "1";
    out.push_back(r);
  }
  return out;
}

std::vector<CoverageRecord> read_coverage_records(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "coverage_times.csv");
  if (!in)
    throw std::runtime_error("cannot open coverage_times.csv under " + dir);
  std::string line;
  std::getline(in, line);
  std::vector<CoverageRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 6) throw std::runtime_error("malformed record: " + line);
    CoverageRecord r;
    r.drop = std::stoi(f[0]);
    r.user = std::stoi(f[1]);
    r.criterion = criterion_from(f[2]);
    r.covered = f[3] == "1";
    r.coverage_s = std::stod(f[4]);
    r.formation_service_s = std::stod(f[5]);
    out.push_back(r);
  }
  return out;
}

nlohmann::json read_manifest(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "manifest.json");
  if (!in) throw std::runtime_error("cannot open manifest.json under " + dir);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace leomimo
