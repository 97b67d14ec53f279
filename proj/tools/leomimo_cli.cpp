// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run experiments from a JSON config, validate
// configs, summarize result sets into CDF tables, and compare result sets.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "leomimo/harness.hpp"
#include "leomimo/version.hpp"

namespace {

using namespace leomimo;

std::string output_dir_for(const ExperimentConfig& cfg,
                           const std::string& cli_override) {
  if (!cli_override.empty()) return cli_override;
  if (const char* env = std::getenv("LEOMIMO_OUTPUT_DIR")) return env;
  return cfg.output.directory;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

int cmd_validate(const std::string& path) {
  try {
    const ExperimentConfig cfg = load_config_file(path);
    std::cout << config_echo(cfg).dump(2) << "\n";
    std::cout << "OK: " << path << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const std::string& path, const std::string& out_override) {
  ExperimentConfig cfg;
  try {
    cfg = load_config_file(path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  const std::string dir = output_dir_for(cfg, out_override);
  cfg.output.directory = dir;

  std::cerr << "running " << path << " -> " << dir << "\n";
  const ExperimentResult result = run(cfg);
  write_result(result, dir);

  std::cout << "wrote " << result.se_records.size() << " SE records, "
            << result.coverage_records.size() << " coverage records, "
            << result.events.size() << " events to " << dir << "\n";
  std::ifstream summary(std::filesystem::path(dir) / "summary.csv");
  std::string line;
  while (std::getline(summary, line)) std::cout << "  " << line << "\n";
  return 0;
}

struct RecordFilter {
  std::string policy, criterion, mode;
  bool accept(const SeRecord& r) const {
    if (!policy.empty() && policy != to_string(r.policy)) return false;
    if (!criterion.empty() && criterion != to_string(r.criterion))
      return false;
    if (!mode.empty() && mode != to_string(r.mode)) return false;
    return true;
  }
};

int cmd_summarize(const std::string& dir, const std::string& metric,
                  int grid, const RecordFilter& filter,
                  const std::string& out_csv) {
  std::vector<double> samples;
  if (metric == "se" || metric == "sinr") {
    for (const auto& r : read_se_records(dir))
      if (filter.accept(r)) samples.push_back(metric == "se" ? r.se : r.sinr);
  } else if (metric == "cluster_size") {
    for (const auto& r : read_se_records(dir))
      if (filter.accept(r))
        samples.push_back(static_cast<double>(r.cluster_size));
  } else if (metric == "coverage_time") {
    for (const auto& r : read_coverage_records(dir))
      if (r.covered &&
          (filter.criterion.empty() ||
           filter.criterion == to_string(r.criterion)))
        samples.push_back(r.coverage_s);
  } else {
    std::cerr << "unknown metric: " << metric << "\n";
    return 1;
  }
  if (samples.empty()) {
    std::cerr << "no samples matched\n";
    return 1;
  }

  const auto cdf = summarize_cdf(samples, grid);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_csv.empty()) {
    file.open(out_csv);
    out = &file;
  }
  *out << "value,cum_prob\n";
  for (const auto& [x, p] : cdf)
    *out << format_double(x) << ',' << format_double(p) << "\n";
  std::cerr << "samples: " << samples.size()
            << "  median: " << format_double(median_of(samples))
            << "  mean: " << format_double(mean_of(samples)) << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, bool paired,
                bool as_json) {
  struct Group {
    std::vector<double> se;
    std::map<std::pair<int, int>, double> by_drop_user;
  };
  // group key: (dir index, policy, criterion, mode)
  std::map<std::string, Group> groups;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (const auto& r : read_se_records(dirs[d])) {
      std::string key = std::string(to_string(r.policy)) + "/" +
                        to_string(r.criterion) + "/" + to_string(r.mode);
      if (dirs.size() > 1) key = dirs[d] + ":" + key;
      auto& g = groups[key];
      g.se.push_back(r.se);
      g.by_drop_user[{r.drop, r.user}] = r.se;
    }
  }
  nlohmann::json j;
  std::cout << "group,samples,mean_se,median_se\n";
  for (const auto& [key, g] : groups) {
    std::cout << key << ',' << g.se.size() << ','
              << format_double(mean_of(g.se)) << ','
              << format_double(median_of(g.se)) << "\n";
    j["groups"][key] = {{"samples", g.se.size()},
                        {"mean_se", mean_of(g.se)},
                        {"median_se", median_of(g.se)}};
  }

  // pairwise ordering checks between groups (e.g. UC vs FC)
  std::vector<std::string> keys;
  for (const auto& [key, g] : groups) keys.push_back(key);
  for (std::size_t a = 0; a < keys.size(); ++a) {
    for (std::size_t b = a + 1; b < keys.size(); ++b) {
      const Group& ga = groups[keys[a]];
      const Group& gb = groups[keys[b]];
      const double ma = mean_of(ga.se), mb = mean_of(gb.se);
      std::string verdict = ma <= mb ? "le" : "gt";
      double frac_ge = 0.0;
      if (paired) {
        int total = 0, ge = 0;
        for (const auto& [du, v] : ga.by_drop_user) {
          auto it = gb.by_drop_user.find(du);
          if (it == gb.by_drop_user.end()) continue;
          ++total;
          if (v >= it->second) ++ge;
        }
        frac_ge = total ? static_cast<double>(ge) / total : 0.0;
        std::cout << "pair," << keys[a] << "," << keys[b] << ",mean_" << verdict
                  << ",frac_first_ge=" << format_double(frac_ge) << "\n";
      } else {
        std::cout << "pair," << keys[a] << "," << keys[b] << ",mean_" << verdict
                  << "\n";
      }
      j["pairs"].push_back({{"first", keys[a]},
                            {"second", keys[b]},
                            {"mean_first", ma},
                            {"mean_second", mb},
                            {"first_le_second", ma <= mb},
                            {"frac_first_ge", frac_ge}});
    }
  }
  if (as_json) std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(leomimo::kProjectName) +
               " - distributed massive MIMO over LEO constellations, "
               "link-level Monte Carlo simulator"};
  app.set_version_flag("--version", leomimo::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_override;
  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "JSON config path")->required();
  run_cmd->add_option("--output-dir", out_override,
                      "override output.directory (also: LEOMIMO_OUTPUT_DIR)");

  std::string val_path;
  auto* val_cmd = app.add_subcommand("validate", "validate a config file");
  val_cmd->add_option("config", val_path, "JSON config path")->required();

  std::string sum_dir, metric = "se", out_csv;
  int grid = 101;
  RecordFilter filter;
  auto* sum_cmd =
      app.add_subcommand("summarize", "empirical CDF of a result metric");
  sum_cmd->add_option("result", sum_dir, "result directory")->required();
  sum_cmd->add_option("--metric", metric, "se|sinr|cluster_size|coverage_time");
  sum_cmd->add_option("--grid", grid, "number of CDF grid points");
  sum_cmd->add_option("--policy", filter.policy, "filter: uc|fc|nct");
  sum_cmd->add_option("--criterion", filter.criterion,
                      "filter: best_channel|max_service_time");
  sum_cmd->add_option("--mode", filter.mode,
                      "filter: phase_aware|asynchronous");
  sum_cmd->add_option("-o,--output", out_csv, "write CDF to this CSV file");

  std::vector<std::string> cmp_dirs;
  bool paired = false, as_json = false;
  auto* cmp_cmd = app.add_subcommand("compare", "compare result sets");
  cmp_cmd->add_option("results", cmp_dirs, "result directories")->required();
  cmp_cmd->add_flag("--paired", paired, "pair records by (drop, user)");
  cmp_cmd->add_flag("--json", as_json, "also print a JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config_path, out_override);
    if (*val_cmd) return cmd_validate(val_path);
    if (*sum_cmd)
      return cmd_summarize(sum_dir, metric, grid, filter, out_csv);
    if (*cmp_cmd) return cmd_compare(cmp_dirs, paired, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
