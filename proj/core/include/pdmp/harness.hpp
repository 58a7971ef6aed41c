#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/models.hpp"

namespace pdmp {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
  std::pair<double, double> ci95{0.0, 0.0};
  std::size_t excluded_exploded = 0;
};

// Two-pass mean and standard error, summed in index order.
Estimate make_estimate(std::span<const double> values, std::size_t excluded_exploded = 0);

// Per-path statistics of n replications, row-major (n x width). Rows of
// exploded paths are NaN and flagged.
struct Replications {
  std::size_t width = 0;
  std::vector<double> values;
  std::vector<char> exploded;
  std::size_t n_exploded = 0;

  std::size_t size() const noexcept { return exploded.size(); }
  // Column k over non-exploded paths, in replication order.
  std::vector<double> column(std::size_t k) const;
  Estimate estimate(std::size_t k) const;
  double max_abs(std::size_t k) const;
};

using PathStatistic = std::function<void(const Skeleton&, std::span<double> out)>;

// Replication i uses VariateStream(seed, i) whatever the worker count, and
// each worker writes its own rows, so the result is bit-identical across
// worker counts. The first error in replication order is rethrown.
Replications run_replications(const PdmpModel& model, const State& x0, double horizon,
                              std::size_t n, std::uint64_t seed, std::size_t width,
                              const PathStatistic& stat, std::size_t workers = 1);

// Errors: BadParameters for n < 2, AllExploded.
Estimate estimate(const PdmpModel& model, const std::function<double(const Skeleton&)>& functional,
                  const State& x0, double horizon, std::size_t n, std::uint64_t seed,
                  std::size_t workers = 1);

struct Verdict {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct NamedEstimate {
  std::string name;
  Estimate estimate;
};

struct ExperimentReport {
  std::string name;
  std::string model;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<NamedEstimate> estimates;
  std::vector<std::pair<std::string, double>> values;
  std::vector<Verdict> verdicts;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t exploded = 0;

  bool passed() const;
  const Estimate& estimate(const std::string& key) const;
  double value(const std::string& key) const;
  const Verdict& verdict(const std::string& key) const;
};

struct RunSpec {
  double t = 1.0;
  std::size_t n = 10'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

// |a - b| over max(|a|, |b|, floor).
inline constexpr double kRelativeFloor = 1e-12;
double relative_deviation(double a, double b, double floor = kRelativeFloor);

ExperimentReport experiment_simulate(const ModelBundle& bundle, const std::string& f,
                                     const RunSpec& run);
ExperimentReport experiment_martingale_check(const ModelBundle& bundle, const std::string& h,
                                             const RunSpec& run);
ExperimentReport experiment_dynkin_check(const ModelBundle& bundle, const std::string& f,
                                         const RunSpec& run);
// Estimates under the tilted model (tilted, importance = g / M^h) and the
// original model (crude, reweighted = g M^h) with common random numbers.
ExperimentReport experiment_is_consistency(const ModelBundle& bundle, const std::string& h,
                                           const std::string& g, const RunSpec& run,
                                           bool require_variance_reduction = false);
ExperimentReport experiment_reverse_check(const ModelBundle& bundle, const std::string& h,
                                          const RunSpec& run);
ExperimentReport experiment_generator_forms(const ModelBundle& bundle, const std::string& h,
                                            const std::string& f, const RunSpec& run);

// Flag set and config file contents.
struct ExperimentConfig {
  std::string experiment = "martingale-check";
  std::string model = "ctmc3";
  std::map<std::string, double> params;
  std::string h;  // empty: the bundle's recommended h
  std::string f;  // empty: h
  std::string g;  // empty: f
  double t = 1.0;
  std::size_t n = 10'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool variance_reduction = false;
  std::string format = "json";
  std::string out;
};

std::vector<std::string> experiment_names();

// Errors: BadConfig.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Numbers with 17 significant digits. Timing fields are left out when
// `with_timing` is false, which gives the canonical form used for
// reproducibility comparisons.
std::string report_to_json(const ExperimentReport& report, bool with_timing = true);
std::string reports_to_json(std::span<const ExperimentReport> reports, bool with_timing = true);
std::string csv_header();
std::string report_to_csv_row(const ExperimentReport& report, bool with_timing = true);

}  // namespace pdmp
