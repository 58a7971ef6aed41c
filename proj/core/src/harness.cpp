#include "pdmp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pdmp/errors.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/tilting.hpp"

namespace pdmp {

// ----------------------------------------------------------- estimation

Estimate make_estimate(std::span<const double> values, std::size_t excluded_exploded) {
  Estimate e;
  e.n = values.size();
  e.excluded_exploded = excluded_exploded;
  if (e.n == 0) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(e.n);
  if (e.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
  }
  e.ci95 = {e.mean - 1.96 * e.std_error, e.mean + 1.96 * e.std_error};
  return e;
}

std::vector<double> Replications::column(std::size_t k) const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (!exploded[i]) out.push_back(values[i * width + k]);
  return out;
}

Estimate Replications::estimate(std::size_t k) const {
  const std::vector<double> col = column(k);
  return make_estimate(col, n_exploded);
}

double Replications::max_abs(std::size_t k) const {
  double m = 0.0;
  for (double v : column(k)) m = std::max(m, std::isnan(v) ? kInfinity : std::abs(v));
  return m;
}

Replications run_replications(const PdmpModel& model, const State& x0, double horizon,
                              std::size_t n, std::uint64_t seed, std::size_t width,
                              const PathStatistic& stat, std::size_t workers) {
  Replications r;
  r.width = width;
  r.values.assign(n * width, std::numeric_limits<double>::quiet_NaN());
  r.exploded.assign(n, 0);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n));

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_at(workers, n);
  auto work = [&](std::size_t w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        const Skeleton sk = simulate_skeleton(model, x0, horizon, VariateStream(seed, i));
        if (sk.exploded()) {
          r.exploded[i] = 1;
          continue;
        }
        stat(sk, std::span<double>(r.values.data() + i * width, width));
      } catch (...) {
        errors[w] = std::current_exception();
        error_at[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
  for (char e : r.exploded) r.n_exploded += e ? 1 : 0;
  return r;
}

Estimate estimate(const PdmpModel& model, const std::function<double(const Skeleton&)>& functional,
                  const State& x0, double horizon, std::size_t n, std::uint64_t seed,
                  std::size_t workers) {
  if (n < 2) throw Error(ErrorCode::BadParameters, "estimate needs n >= 2");
  const Replications r = run_replications(
      model, x0, horizon, n, seed, 1,
      [&](const Skeleton& sk, std::span<double> out) { out[0] = functional(sk); }, workers);
  if (r.n_exploded == n) throw Error(ErrorCode::AllExploded, "every replication exploded");
  return r.estimate(0);
}

// --------------------------------------------------------------- report

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const Estimate& ExperimentReport::estimate(const std::string& key) const {
  for (const NamedEstimate& e : estimates)
    if (e.name == key) return e.estimate;
  throw Error(ErrorCode::BadConfig, "report has no estimate '" + key + "'");
}

double ExperimentReport::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw Error(ErrorCode::BadConfig, "report has no value '" + key + "'");
}

const Verdict& ExperimentReport::verdict(const std::string& key) const {
  for (const Verdict& v : verdicts)
    if (v.name == key) return v;
  throw Error(ErrorCode::BadConfig, "report has no verdict '" + key + "'");
}

double relative_deviation(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// |a - b| <= 3 sigma, with a floor for exact (zero variance) comparisons.
Verdict within_sigma(std::string name, double a, double b, double sigma) {
  const double threshold = std::max(3.0 * sigma, 1e-12);
  const double value = std::abs(a - b);
  return {std::move(name), value <= threshold, value, threshold};
}

Verdict at_most(std::string name, double value, double threshold) {
  return {std::move(name), value <= threshold, value, threshold};
}

double combined(const Estimate& a, const Estimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

ExperimentReport base_report(std::string name, const ModelBundle& bundle, const RunSpec& run) {
  ExperimentReport r;
  r.name = std::move(name);
  r.model = bundle.model.name;
  for (const auto& [k, v] : bundle.parameters) r.parameters.emplace_back(k, fmt(v));
  r.parameters.emplace_back("t", fmt(run.t));
  r.parameters.emplace_back("n", std::to_string(run.n));
  r.seed = run.seed;
  r.workers = run.workers;
  return r;
}

void require_run(const RunSpec& run) {
  if (run.n < 2) throw Error(ErrorCode::BadParameters, "experiments need n >= 2");
  if (!(std::isfinite(run.t) && run.t >= 0.0))
    throw Error(ErrorCode::BadParameters, "experiment time must be finite and non-negative");
}

void require_not_all_exploded(const Replications& r) {
  if (r.size() > 0 && r.n_exploded == r.size())
    throw Error(ErrorCode::AllExploded, "every replication exploded");
}

}  // namespace

// ----------------------------------------------------------- experiments

ExperimentReport experiment_simulate(const ModelBundle& bundle, const std::string& f,
                                     const RunSpec& run) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("simulate", bundle, run);
  r.parameters.emplace_back("f", f);
  const Observable obs = bundle.observable(f);
  const PdmpModel& m = bundle.model;
  const double t = run.t;
  const Replications reps = run_replications(
      m, bundle.x0, t, run.n, run.seed, 2,
      [&](const Skeleton& sk, std::span<double> out) {
        out[0] = obs(sk, m, t);
        out[1] = static_cast<double>(sk.jumps_by(t));
      },
      run.workers);
  require_not_all_exploded(reps);
  r.estimates.push_back({"f_t", reps.estimate(0)});
  r.estimates.push_back({"jumps", reps.estimate(1)});
  if (const auto it = bundle.oracles.find(f); it != bundle.oracles.end()) {
    const double oracle = it->second(t);
    r.values.emplace_back("oracle", oracle);
    r.verdicts.push_back(within_sigma("oracle_match", r.estimate("f_t").mean, oracle,
                                      r.estimate("f_t").std_error));
  }
  r.exploded = reps.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

ExperimentReport experiment_martingale_check(const ModelBundle& bundle, const std::string& h,
                                             const RunSpec& run) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("martingale-check", bundle, run);
  r.parameters.emplace_back("h", h);
  const TestFunction& hf = bundle.function(h);
  const ExpMartingale mh(bundle.model, hf);
  const double t = run.t;
  const Replications reps = run_replications(
      bundle.model, bundle.x0, t, run.n, run.seed, 1,
      [&](const Skeleton& sk, std::span<double> out) { out[0] = mh(sk, t); }, run.workers);
  require_not_all_exploded(reps);
  const Estimate e = reps.estimate(0);
  r.estimates.push_back({"martingale", e});
  r.verdicts.push_back(within_sigma("mean_one", e.mean, 1.0, e.std_error));
  if (bundle.ctmc) {
    const double oracle = ctmc_feynman_kac_oracle(bundle, hf, TestFunction::constant(1.0), t);
    r.values.emplace_back("oracle", oracle);
    r.verdicts.push_back(at_most("oracle_unit", std::abs(oracle - 1.0), 1e-9));
    r.verdicts.push_back(within_sigma("oracle_match", e.mean, oracle, e.std_error));
  }
  r.exploded = reps.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

ExperimentReport experiment_dynkin_check(const ModelBundle& bundle, const std::string& f,
                                         const RunSpec& run) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("dynkin-check", bundle, run);
  r.parameters.emplace_back("f", f);
  const TestFunction& ff = bundle.function(f);
  const DynkinProcess u(bundle.model, ff);
  const PdmpModel& m = bundle.model;
  const double t = run.t;
  const Replications reps = run_replications(
      m, bundle.x0, t, run.n, run.seed, 2,
      [&](const Skeleton& sk, std::span<double> out) {
        out[0] = u(sk, t);
        out[1] = ff.value(path_state(sk, m, t));
      },
      run.workers);
  require_not_all_exploded(reps);
  const Estimate ue = reps.estimate(0);
  const Estimate fe = reps.estimate(1);
  r.estimates.push_back({"dynkin", ue});
  r.estimates.push_back({"f_t", fe});
  const double f0 = ff.value(bundle.x0);
  r.values.emplace_back("f_x0", f0);
  r.verdicts.push_back(within_sigma("dynkin_mean", ue.mean, f0, ue.std_error));
  std::optional<double> oracle;
  if (const auto it = bundle.oracles.find(f); it != bundle.oracles.end()) oracle = it->second(t);
  if (bundle.ctmc) {
    const double fk = ctmc_feynman_kac_oracle(bundle, TestFunction::constant(1.0), ff, t);
    r.values.emplace_back("feynman_kac", fk);
    if (oracle) r.verdicts.push_back(at_most("oracles_agree", std::abs(fk - *oracle), 1e-9));
    if (!oracle) oracle = fk;
  }
  if (oracle) {
    r.values.emplace_back("oracle", *oracle);
    r.verdicts.push_back(within_sigma("oracle_match", fe.mean, *oracle, fe.std_error));
  }
  r.exploded = reps.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

ExperimentReport experiment_is_consistency(const ModelBundle& bundle, const std::string& h,
                                           const std::string& g, const RunSpec& run,
                                           bool require_variance_reduction) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("is-consistency", bundle, run);
  r.parameters.emplace_back("h", h);
  r.parameters.emplace_back("g", g);
  const TestFunction& hf = bundle.function(h);
  const Observable obs = bundle.observable(g);
  const PdmpModel& m = bundle.model;
  const PdmpModel tilted = tilt_model(m, hf);
  const ExpMartingale forward(m, hf);
  const ExpMartingale backward(tilted, reciprocal(hf, m.flow));
  const double t = run.t;

  const Replications orig = run_replications(
      m, bundle.x0, t, run.n, run.seed, 2,
      [&](const Skeleton& sk, std::span<double> out) {
        const double gv = obs(sk, m, t);
        out[0] = gv;
        out[1] = gv == 0.0 ? 0.0 : gv * forward(sk, t);
      },
      run.workers);
  const Replications tilt = run_replications(
      tilted, bundle.x0, t, run.n, run.seed, 2,
      [&](const Skeleton& sk, std::span<double> out) {
        const double gv = obs(sk, tilted, t);
        out[0] = gv;
        out[1] = gv == 0.0 ? 0.0 : gv * backward(sk, t);
      },
      run.workers);
  require_not_all_exploded(orig);
  require_not_all_exploded(tilt);

  const Estimate crude = orig.estimate(0);
  const Estimate reweighted = orig.estimate(1);
  const Estimate direct = tilt.estimate(0);
  const Estimate importance = tilt.estimate(1);
  r.estimates.push_back({"tilted", direct});
  r.estimates.push_back({"reweighted", reweighted});
  r.estimates.push_back({"crude", crude});
  r.estimates.push_back({"importance", importance});
  r.verdicts.push_back(
      within_sigma("tilted_vs_reweighted", direct.mean, reweighted.mean, combined(direct, reweighted)));
  r.verdicts.push_back(
      within_sigma("crude_vs_importance", crude.mean, importance.mean, combined(crude, importance)));
  r.values.emplace_back("tilted_variance", direct.std_error * direct.std_error * direct.n);
  r.values.emplace_back("reweighted_variance",
                        reweighted.std_error * reweighted.std_error * reweighted.n);
  r.values.emplace_back("crude_variance", crude.std_error * crude.std_error * crude.n);
  r.values.emplace_back("importance_variance",
                        importance.std_error * importance.std_error * importance.n);
  if (require_variance_reduction) {
    const bool ok = importance.std_error < crude.std_error;
    r.verdicts.push_back({"variance_reduction", ok, importance.std_error, crude.std_error});
  }
  if (bundle.ctmc && bundle.functions.count(g)) {
    const TestFunction& gf = bundle.function(g);
    const double weighted = ctmc_feynman_kac_oracle(bundle, hf, gf, t);
    const double plain = ctmc_feynman_kac_oracle(bundle, TestFunction::constant(1.0), gf, t);
    r.values.emplace_back("oracle_tilted", weighted);
    r.values.emplace_back("oracle_crude", plain);
    r.verdicts.push_back(within_sigma("tilted_oracle", direct.mean, weighted, direct.std_error));
    r.verdicts.push_back(
        within_sigma("reweighted_oracle", reweighted.mean, weighted, reweighted.std_error));
    r.verdicts.push_back(within_sigma("crude_oracle", crude.mean, plain, crude.std_error));
  }
  r.exploded = orig.n_exploded + tilt.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

ExperimentReport experiment_reverse_check(const ModelBundle& bundle, const std::string& h,
                                          const RunSpec& run) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("reverse-check", bundle, run);
  r.parameters.emplace_back("h", h);
  const TestFunction& hf = bundle.function(h);
  const PdmpModel tilted = tilt_model(bundle.model, hf);
  const ExpMartingale forward(bundle.model, hf);
  const ExpMartingale backward(tilted, reciprocal(hf, bundle.model.flow));
  const double t = run.t;
  const Replications reps = run_replications(
      bundle.model, bundle.x0, t, run.n, run.seed, 2,
      [&](const Skeleton& sk, std::span<double> out) {
        const double p = forward(sk, t) * backward(sk, t);
        out[0] = p;
        out[1] = p - 1.0;
      },
      run.workers);
  require_not_all_exploded(reps);
  r.estimates.push_back({"product", reps.estimate(0)});
  const double worst = reps.max_abs(1);
  r.values.emplace_back("max_abs_deviation", worst);
  r.verdicts.push_back({"pathwise_product", worst < 1e-6, worst, 1e-6});
  r.exploded = reps.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

ExperimentReport experiment_generator_forms(const ModelBundle& bundle, const std::string& h,
                                            const std::string& f, const RunSpec& run) {
  require_run(run);
  Timer timer;
  ExperimentReport r = base_report("generator-forms", bundle, run);
  r.parameters.emplace_back("h", h);
  r.parameters.emplace_back("f", f);
  const PdmpModel& m = bundle.model;
  const TestFunction& hf = bundle.function(h);
  const TestFunction& ff = bundle.function(f);
  const PathFunctional forms[] = {tilted_generator(m, hf, ff, GeneratorForm::direct),
                                  tilted_generator(m, hf, ff, GeneratorForm::ratio),
                                  tilted_generator(m, hf, ff, GeneratorForm::bracket)};

  // Doob transform G~(i, j) = G(i, j) h_j / h_i applied to f.
  std::vector<double> doob;
  if (bundle.ctmc) {
    const CtmcSpec& spec = *bundle.ctmc;
    const std::vector<double> hv = spec.tabulate(hf);
    const std::vector<double> fv = spec.tabulate(ff);
    doob.assign(spec.size(), 0.0);
    for (std::size_t i = 0; i < spec.size(); ++i)
      for (std::size_t j = 0; j < spec.size(); ++j)
        if (j != i) doob[i] += spec.generator[i][j] * hv[j] / hv[i] * (fv[j] - fv[i]);
  }

  const double t = run.t;
  const Replications reps = run_replications(
      m, bundle.x0, t, run.n, run.seed, 3,
      [&](const Skeleton& sk, std::span<double> out) {
        double worst_forms = 0.0;
        double worst_doob = 0.0;
        double total = 0.0;
        for (const PathSegment& seg : path_segments(sk, t)) {
          if (!(seg.length > 0.0) || seg.start->is_cemetery()) continue;
          double v[3];
          for (int k = 0; k < 3; ++k) v[k] = af_eval(forms[k], m.flow, *seg.start, seg.length, m.quadrature);
          worst_forms = std::max({worst_forms, relative_deviation(v[0], v[1]),
                                  relative_deviation(v[0], v[2]), relative_deviation(v[1], v[2])});
          if (!doob.empty()) {
            const double expect = doob[bundle.ctmc->index_of(*seg.start->label)] * seg.length;
            for (double x : v) worst_doob = std::max(worst_doob, relative_deviation(x, expect));
          }
          total += v[0];
        }
        out[0] = worst_forms;
        out[1] = worst_doob;
        out[2] = total;
      },
      run.workers);
  require_not_all_exploded(reps);
  r.estimates.push_back({"tilted_generator_L", reps.estimate(2)});
  const double worst = reps.max_abs(0);
  r.values.emplace_back("max_relative_deviation", worst);
  r.verdicts.push_back(at_most("forms_agree", worst, 1e-8));
  if (!doob.empty()) {
    const double worst_doob = reps.max_abs(1);
    r.values.emplace_back("max_doob_deviation", worst_doob);
    r.verdicts.push_back(at_most("doob_matrix", worst_doob, 1e-10));
  }
  r.exploded = reps.n_exploded;
  r.wall_time = timer.seconds();
  return r;
}

// --------------------------------------------------------------- config

std::vector<std::string> experiment_names() {
  return {"simulate", "martingale-check", "dynkin-check", "is-consistency", "reverse-check",
          "generator-forms"};
}

namespace {

void validate_config(const ExperimentConfig& c) {
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    throw Error(ErrorCode::BadConfig, "unknown experiment '" + c.experiment + "'");
  const auto models = bundle_names();
  if (std::find(models.begin(), models.end(), c.model) == models.end() && c.model != "cl")
    throw Error(ErrorCode::BadConfig, "unknown model '" + c.model + "'");
  if (!(c.t >= 0.0) || !std::isfinite(c.t)) throw Error(ErrorCode::BadConfig, "t must be finite and >= 0");
  if (c.workers == 0) throw Error(ErrorCode::BadConfig, "workers must be >= 1");
  if (c.format != "json" && c.format != "csv")
    throw Error(ErrorCode::BadConfig, "format must be json or csv");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  using nlohmann::json;
  ExperimentConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
  try {
    if (j.contains("model")) {
      const json& m = j.at("model");
      c.model = m.value("name", c.model);
      if (m.contains("params"))
        for (const auto& [k, v] : m.at("params").items()) c.params[k] = v.get<double>();
    }
    if (j.contains("h")) c.h = j.at("h").value("name", c.h);
    if (j.contains("experiment")) {
      const json& e = j.at("experiment");
      c.experiment = e.value("name", c.experiment);
      c.t = e.value("t", c.t);
      if (e.contains("n") && !e.at("n").is_number_unsigned())
        throw Error(ErrorCode::BadConfig, "experiment.n must be a non-negative integer");
      c.n = e.value("n", c.n);
      c.f = e.value("f", c.f);
      c.g = e.value("g", c.g);
      c.variance_reduction = e.value("variance_reduction", c.variance_reduction);
    }
    if (j.contains("rng")) {
      const json& r = j.at("rng");
      for (const char* key : {"seed", "workers"})
        if (r.contains(key) && !r.at(key).is_number_unsigned())
          throw Error(ErrorCode::BadConfig, std::string("rng.") + key + " must be a non-negative integer");
      c.seed = r.value("seed", c.seed);
      c.workers = r.value("workers", c.workers);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      c.format = o.value("format", c.format);
      c.out = o.value("path", c.out);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
  validate_config(c);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["model"]["name"] = c.model;
  j["model"]["params"] = ordered_json::object();
  for (const auto& [k, v] : c.params) j["model"]["params"][k] = v;
  j["h"]["name"] = c.h;
  j["experiment"] = {{"name", c.experiment}, {"t", c.t},         {"n", c.n},
                     {"f", c.f},             {"g", c.g},         {"variance_reduction", c.variance_reduction}};
  j["rng"] = {{"seed", c.seed}, {"workers", c.workers}};
  j["output"] = {{"format", c.format}, {"path", c.out}};
  return j.dump(2);
}

ExperimentReport run_experiment(const ExperimentConfig& c) {
  const ModelBundle bundle = make_bundle(c.model, c.params);
  const std::string h = c.h.empty() ? bundle.recommended_h : c.h;
  const std::string f = c.f.empty() ? h : c.f;
  const std::string g = c.g.empty() ? f : c.g;
  const RunSpec run{c.t, c.n, c.seed, c.workers};
  if (c.experiment == "simulate") return experiment_simulate(bundle, f, run);
  if (c.experiment == "martingale-check") return experiment_martingale_check(bundle, h, run);
  if (c.experiment == "dynkin-check") return experiment_dynkin_check(bundle, f, run);
  if (c.experiment == "is-consistency")
    return experiment_is_consistency(bundle, h, g, run, c.variance_reduction);
  if (c.experiment == "reverse-check") return experiment_reverse_check(bundle, h, run);
  if (c.experiment == "generator-forms") return experiment_generator_forms(bundle, h, f, run);
  throw Error(ErrorCode::BadConfig, "unknown experiment '" + c.experiment + "'");
}

// -------------------------------------------------------------- writers

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt(v);
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string estimate_json(const Estimate& e) {
  std::ostringstream os;
  os << "{\"mean\": " << num(e.mean) << ", \"stderr\": " << num(e.std_error)
     << ", \"n\": " << e.n << ", \"ci95\": [" << num(e.ci95.first) << ", " << num(e.ci95.second)
     << "], \"excluded_exploded\": " << e.excluded_exploded << "}";
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_json(const ExperimentReport& r, bool with_timing) {
  std::ostringstream os;
  os << "{\"name\": " << quote(r.name) << ", \"model\": " << quote(r.model)
     << ", \"seed\": " << r.seed;
  if (with_timing) os << ", \"workers\": " << r.workers << ", \"wall_time\": " << num(r.wall_time);
  os << ", \"exploded\": " << r.exploded << ", \"passed\": " << (r.passed() ? "true" : "false");
  os << ", \"parameters\": {";
  for (std::size_t i = 0; i < r.parameters.size(); ++i)
    os << (i ? ", " : "") << quote(r.parameters[i].first) << ": " << quote(r.parameters[i].second);
  os << "}, \"estimates\": {";
  for (std::size_t i = 0; i < r.estimates.size(); ++i)
    os << (i ? ", " : "") << quote(r.estimates[i].name) << ": " << estimate_json(r.estimates[i].estimate);
  os << "}, \"values\": {";
  for (std::size_t i = 0; i < r.values.size(); ++i)
    os << (i ? ", " : "") << quote(r.values[i].first) << ": " << num(r.values[i].second);
  os << "}, \"verdicts\": [";
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    const Verdict& v = r.verdicts[i];
    os << (i ? ", " : "") << "{\"name\": " << quote(v.name)
       << ", \"passed\": " << (v.passed ? "true" : "false") << ", \"value\": " << num(v.value)
       << ", \"threshold\": " << num(v.threshold) << "}";
  }
  os << "]}";
  return os.str();
}

std::string reports_to_json(std::span<const ExperimentReport> reports, bool with_timing) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i)
    out += "  " + report_to_json(reports[i], with_timing) + (i + 1 < reports.size() ? ",\n" : "\n");
  return out + "]\n";
}

std::string csv_header() {
  return "name,model,seed,workers,wall_time,exploded,passed,parameters,estimates,values,verdicts";
}

std::string report_to_csv_row(const ExperimentReport& r, bool with_timing) {
  std::string params, ests, vals, verds;
  for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + v;
  for (const NamedEstimate& e : r.estimates) {
    const Estimate& x = e.estimate;
    ests += (ests.empty() ? "" : ";") + e.name + "=" + num(x.mean) + "|" + num(x.std_error) + "|" +
            std::to_string(x.n) + "|" + num(x.ci95.first) + "|" + num(x.ci95.second) + "|" +
            std::to_string(x.excluded_exploded);
  }
  for (const auto& [k, v] : r.values) vals += (vals.empty() ? "" : ";") + k + "=" + num(v);
  for (const Verdict& v : r.verdicts)
    verds += (verds.empty() ? "" : ";") + v.name + "=" + (v.passed ? "pass" : "fail") + "|" +
             num(v.value) + "|" + num(v.threshold);
  std::ostringstream os;
  os << csv_field(r.name) << ',' << csv_field(r.model) << ',' << r.seed << ','
     << (with_timing ? std::to_string(r.workers) : "") << ',' << (with_timing ? num(r.wall_time) : "")
     << ',' << r.exploded << ',' << (r.passed() ? "true" : "false") << ',' << csv_field(params)
     << ',' << csv_field(ests) << ',' << csv_field(vals) << ',' << csv_field(verds);
  return os.str();
}

}  // namespace pdmp
