// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/harness.hpp"
#include "pdmp/hazard.hpp"
#include "pdmp/models.hpp"
#include "pdmp/tilting.hpp"

using namespace pdmp;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

const std::vector<std::string> kBundles{"ctmc3", "cramer-lundberg", "boundary-reset", "aimd"};
const std::vector<std::string> kAllBundles{"ctmc3", "cramer-lundberg", "boundary-reset", "aimd", "ctmc3-clock"};

// States visited by simulated paths, away from jump instants.
std::vector<State> visited_states(const ModelBundle& b, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<State> out;
  for (std::uint64_t i = 0; out.size() < n; ++i) {
    const Skeleton sk = simulate_skeleton(b.model, b.x0, 3.0, VariateStream(seed, i));
    const State y = path_state(sk, b.model, 3.0 * u(rng));
    if (!y.is_boundary() && !y.is_cemetery()) out.push_back(y);
  }
  return out;
}

// s, t >= 0 with s + t inside the flow horizon from x.
std::pair<double, double> split_times(const Flow& flow, const State& x, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double c = flow.horizon(x);
  const double span = std::isfinite(c) ? c : 3.0;
  const double s = span * u(rng);
  return {s, (span - s) * u(rng)};
}

// ---------------------------------------------------------------- 1

Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_flow = 0.0, worst_add = 0.0, worst_surv = 0.0;
  for (const std::string& name : kAllBundles) {
    const ModelBundle b = make_bundle(name, {});
    const PdmpModel& m = b.model;
    const PathFunctional ah = generator_apply(m, b.h());
    std::mt19937_64 rng(101);
    for (const State& x : visited_states(b, 200, 7)) {
      const auto [s, t] = split_times(m.flow, x, rng);
      const State mid = flow_eval(m.flow, x, s);
      const State a = flow_eval(m.flow, x, s + t);
      const State c = flow_eval(m.flow, mid, t);
      worst_flow = std::max(worst_flow, a.label == c.label ? state_distance(a, c) : kInfinity);
      for (const PathFunctional* f : {&m.hazard.measure, &ah}) {
        const double whole = af_eval(*f, m.flow, x, s + t, m.quadrature);
        const double parts = af_eval(*f, m.flow, x, s, m.quadrature) + af_eval(*f, m.flow, mid, t, m.quadrature);
        worst_add = std::max(worst_add, rel(whole, parts));
      }
      const double fw = survival(m.hazard, m.flow, x, s + t, m.quadrature);
      const double fp = survival(m.hazard, m.flow, x, s, m.quadrature) * survival(m.hazard, m.flow, mid, t, m.quadrature);
      worst_surv = std::max(worst_surv, rel(fw, fp));
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "200 cases x " << kAllBundles.size() << " models; max flow " << worst_flow << ", additivity "
           << worst_add << ", survival " << worst_surv << "; " << secs << " s";
  o.require(worst_flow <= 1e-8, "flow semigroup");
  o.require(worst_add <= 1e-8, "additivity");
  o.require(worst_surv <= 1e-8, "F multiplicativity");
  o.require(secs < 30.0, "runtime");
  return o;
}

// ---------------------------------------------------------------- 2

Outcome criterion_2() {
  Outcome o;
  for (const std::string name : {"ctmc3", "cramer-lundberg"}) {
    const ModelBundle b = make_bundle(name, {});
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = experiment_martingale_check(b, b.recommended_h, {1.0, 100'000, 2024, 1});
    const double secs = seconds_since(t0);
    const Estimate& e = r.estimate("martingale");
    o.detail << name << ": mean " << e.mean << " stderr " << e.std_error << " (" << secs << " s); ";
    o.require(r.verdict("mean_one").passed, name + " |mean - 1| <= 3 stderr");
    o.require(e.std_error < 0.02, name + " stderr < 0.02");
    o.require(secs < 60.0, name + " runtime");
  }
  return o;
}

// ---------------------------------------------------------------- 3

Outcome criterion_3() {
  Outcome o;
  const ModelBundle b = make_ctmc3();
  const double t = 1.0;
  const std::pair<const char*, const char*> pairs[] = {{"f", "h"}, {"g", "h2"}, {"f", "h2"}};
  // Independent oracle: the Doob-transformed matrix exponential.
  Eigen::MatrixXd gen(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gen(i, j) = b.ctmc->generator[i][j];
  for (const auto& [g, h] : pairs) {
    const TestFunction& hf = b.function(h);
    const TestFunction& gf = b.function(g);
    const ExpMartingale m(b.model, hf);
    const Estimate e = estimate(
        b.model, [&](const Skeleton& sk) { return gf.value(path_state(sk, b.model, t)) * m(sk, t); }, b.x0, t,
        100'000, 31);
    const double oracle = ctmc_feynman_kac_oracle(b, hf, gf, t);
    const double unit = ctmc_feynman_kac_oracle(b, hf, TestFunction::constant(1.0), t);
    const std::vector<double> hv = b.ctmc->tabulate(hf), gv = b.ctmc->tabulate(gf);
    Eigen::Vector3d hh(hv[0], hv[1], hv[2]), gg(gv[0], gv[1], gv[2]);
    Eigen::Matrix3d doob = hh.cwiseInverse().asDiagonal() * gen * hh.asDiagonal();
    doob -= Eigen::Matrix3d((gen * hh).cwiseQuotient(hh).asDiagonal());
    const double expm = ((doob * t).exp() * gg)(0);
    o.detail << "(" << g << "," << h << "): sim " << e.mean << " +- " << e.std_error << " oracle " << oracle
             << ", |E M - 1| " << std::abs(unit - 1.0) << "; ";
    o.require(std::abs(e.mean - oracle) <= 3.0 * e.std_error, std::string("3 stderr for ") + g + "," + h);
    o.require(std::abs(unit - 1.0) <= 1e-9, std::string("oracle unit for ") + h);
    o.require(rel(oracle, expm) <= 1e-9, std::string("oracle vs matrix exponential for ") + g + "," + h);
  }
  return o;
}

// ---------------------------------------------------------------- 4

Outcome criterion_4() {
  Outcome o;
  const std::pair<const char*, const char*> cases[] = {
      {"ctmc3", "f"}, {"cramer-lundberg", "exp"}, {"boundary-reset", "x2"}, {"aimd", "w2"}};
  for (const auto& [name, f] : cases) {
    const ModelBundle b = make_bundle(name, {});
    const ExperimentReport r = experiment_dynkin_check(b, f, {1.0, 100'000, 77, 1});
    const Estimate& e = r.estimate("dynkin");
    o.detail << name << "/" << f << ": " << e.mean << " +- " << e.std_error << "; ";
    o.require(r.verdict("dynkin_mean").passed, std::string(name) + " Dynkin mean");
  }
  return o;
}

// ---------------------------------------------------------------- 5

Outcome criterion_5() {
  Outcome o;
  struct Case {
    const char* model;
    std::map<std::string, double> params;
    const char* g;
    double t;
  };
  const Case cases[] = {{"ctmc3", {}, "f", 1.0},
                        {"cramer-lundberg", {}, "x", 1.0},
                        {"boundary-reset", {}, "x2", 1.0},
                        {"aimd", {}, "w", 1.0}};
  for (const Case& c : cases) {
    const ModelBundle b = make_bundle(c.model, c.params);
    const ExperimentReport r = experiment_is_consistency(b, b.recommended_h, c.g, {c.t, 100'000, 5, 1});
    const Estimate& a = r.estimate("tilted");
    const Estimate& w = r.estimate("reweighted");
    o.detail << c.model << ": tilted " << a.mean << " reweighted " << w.mean << " (3 sigma "
             << r.verdict("tilted_vs_reweighted").threshold << "); ";
    o.require(r.verdict("tilted_vs_reweighted").passed, std::string(c.model) + " tilted vs reweighted");
  }
  // Ruin before T = 10 from u0 = 6 under the Lundberg tilt theta = mu - lambda / c = 1.
  const ModelBundle cl = make_bundle("cramer-lundberg", {{"u0", 6.0}, {"theta", 1.0}});
  const ExperimentReport r = experiment_is_consistency(cl, "exp", "ruin", {10.0, 100'000, 9, 1}, true);
  const Estimate& crude = r.estimate("crude");
  const Estimate& is = r.estimate("importance");
  o.detail << "ruin(u0=6,T=10): crude " << crude.mean << " +- " << crude.std_error << ", tilted " << is.mean
           << " +- " << is.std_error;
  o.require(is.std_error < crude.std_error, "rare-event variance reduction");
  o.require(r.verdict("crude_vs_importance").passed, "rare-event crude vs tilted agreement");
  return o;
}

// ---------------------------------------------------------------- 6

Outcome criterion_6() {
  Outcome o;
  for (const std::string& name : kAllBundles) {
    const ModelBundle b = make_bundle(name, {});
    const ExperimentReport r = experiment_reverse_check(b, b.recommended_h, {2.0, 10'000, 13, 1});
    o.detail << name << " " << r.value("max_abs_deviation") << "; ";
    o.require(r.verdict("pathwise_product").passed, name);
  }
  return o;
}

// ---------------------------------------------------------------- 7

Outcome criterion_7() {
  Outcome o;
  struct Case {
    const char* model;
    std::map<std::string, double> params;
    const char* h;
    const char* f;
  };
  const Case cases[] = {{"ctmc3", {}, "h", "f"},
                        {"cramer-lundberg", {}, "exp", "x2"},
                        {"boundary-reset", {}, "lin", "x2"},
                        {"boundary-reset", {}, "step", "cos"},
                        {"aimd", {}, "exp", "w2"},
                        {"ctmc3-clock", {}, "h2", "f"}};
  for (const Case& c : cases) {
    const ModelBundle b = make_bundle(c.model, c.params);
    const ExperimentReport r = experiment_generator_forms(b, c.h, c.f, {2.0, 100, 17, 1});
    o.detail << c.model << "(" << c.h << "," << c.f << ") " << r.value("max_relative_deviation") << "; ";
    o.require(r.verdict("forms_agree").passed, std::string(c.model) + " forms");
    if (b.ctmc) {
      o.detail << "Doob " << r.value("max_doob_deviation") << "; ";
      o.require(r.verdict("doob_matrix").passed, "Doob matrix");
    }
  }
  return o;
}

// ---------------------------------------------------------------- 8

Outcome criterion_8() {
  Outcome o;
  const std::size_t paths = 200;
  auto worst_over = [&](const ModelBundle& b, const TestFunction& h, double t,
                        double (ExpMartingale::*form)(const Skeleton&, double) const) {
    const ExpMartingale m(b.model, h);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < paths; ++i) {
      const Skeleton sk = simulate_skeleton(b.model, b.x0, t, VariateStream(41, i));
      worst = std::max(worst, relative_deviation(m(sk, t), (m.*form)(sk, t)));
    }
    return worst;
  };
  // Hunt form: atom-free hazards, path-continuous h.
  for (const std::string name : {"ctmc3", "cramer-lundberg", "aimd"}) {
    const ModelBundle b = make_bundle(name, {});
    const double w = worst_over(b, b.h(), 2.0, &ExpMartingale::hunt_form);
    o.detail << "Hunt " << name << " " << w << "; ";
    o.require(w <= 1e-9, "Hunt " + name);
  }
  // Ito form: A^pd h = 0, from atom-free models and from the boundary model
  // with h satisfying h(1) = Qh.
  {
    const ModelBundle b = make_boundary_reset(0.8, 0.0, 0.3);
    const double w = worst_over(b, b.function("cos"), 2.0, &ExpMartingale::ito_form);
    o.detail << "Ito boundary/cos " << w << "; ";
    o.require(w <= 1e-9, "Ito boundary");
  }
  for (const std::string name : {"cramer-lundberg", "aimd"}) {
    const ModelBundle b = make_bundle(name, {});
    const double w = worst_over(b, b.h(), 2.0, &ExpMartingale::ito_form);
    o.detail << "Ito " << name << " " << w << "; ";
    o.require(w <= 1e-9, "Ito " + name);
  }
  // Step form: the three-state chain as a quasi-step process (countdown clock
  // with forced jumps), h a table over the labels.
  {
    const ModelBundle b = make_ctmc3_clocked(0.5);
    for (const std::string hn : {"h", "h2"}) {
      const double w = worst_over(b, b.function(hn), 3.0, &ExpMartingale::step_form);
      o.detail << "step ctmc3-clock/" << hn << " " << w << "; ";
      o.require(w <= 1e-9, "step ctmc3-clock " + hn);
    }
    const ModelBundle d = make_boundary_reset(0.0, {{0.0, 0.5}, {0.25, 0.5}}, 0.3);
    const double w = worst_over(d, d.function("step"), 3.0, &ExpMartingale::step_form);
    o.detail << "step boundary/step " << w << "; ";
    o.require(w <= 1e-9, "step boundary");
  }
  // Diagnostic only: with a continuous hazard the chain is not quasi-step and
  // the step form drops the exp(-int Gh/h) factor.
  {
    const ModelBundle b = make_ctmc3();
    const double w = worst_over(b, b.h(), 3.0, &ExpMartingale::step_form);
    o.detail << "(rate-chain step form deviates by " << w << ", expected)";
  }
  return o;
}

// ---------------------------------------------------------------- 9

Outcome criterion_9() {
  Outcome o;
  double worst_restore = 0.0;
  std::size_t forced = 0;
  for (const std::string& name : kAllBundles) {
    const ModelBundle b = make_bundle(name, {});
    const PdmpModel& m = b.model;
    const TestFunction& h = b.h();
    const PdmpModel t = tilt_model(m, h);
    const PdmpModel back = tilt_model(t, reciprocal(h, m.flow));
    std::mt19937_64 rng(5);
    for (const State& x : visited_states(b, 50, 19)) {
      const auto [s, len] = split_times(m.flow, x, rng);
      const double span = s + len;
      o.require(flow_eval(m.flow, x, span) == flow_eval(t.flow, x, span), name + " flow unchanged");
      const auto a0 = af_atoms(m.hazard.measure, x, 0.0, m.flow.horizon(x) < kInfinity ? m.flow.horizon(x) : span);
      const auto a1 = af_atoms(t.hazard.measure, x, 0.0, m.flow.horizon(x) < kInfinity ? m.flow.horizon(x) : span);
      const auto a2 = af_atoms(back.hazard.measure, x, 0.0, m.flow.horizon(x) < kInfinity ? m.flow.horizon(x) : span);
      bool same = a0.size() == a1.size() && a0.size() == a2.size();
      for (std::size_t k = 0; same && k < a0.size(); ++k) {
        same = a0[k].offset == a1[k].offset && a0[k].offset == a2[k].offset;
        if (a0[k].value == 1.0) {
          ++forced;
          o.require(a1[k].value == 1.0, name + " forced atom stays forced");
        }
        worst_restore = std::max(worst_restore, rel(a0[k].value, a2[k].value));
      }
      o.require(same, name + " identical atom offsets");
      const State y = flow_eval(m.flow, x, s);
      if (m.hazard.measure.density)
        worst_restore = std::max(worst_restore, rel(m.hazard.measure.density(y), back.hazard.measure.density(y)));
      for (const auto& [fname, f] : b.functions)
        worst_restore = std::max(worst_restore, rel(m.kernel->integrate(y, f), back.kernel->integrate(y, f)));
    }
  }
  o.detail << "forced atoms checked " << forced << ", max restore deviation " << worst_restore;
  o.require(forced > 0, "forced atoms present");
  o.require(worst_restore <= 1e-10, "tilt by h then 1/h restores the triple");
  return o;
}

// --------------------------------------------------------------- 10

Outcome criterion_10() {
  Outcome o;
  std::size_t runs = 0;
  for (const std::string& exp : experiment_names()) {
    for (const std::string& model : kAllBundles) {
      ExperimentConfig c;
      c.experiment = exp;
      c.model = model;
      c.n = 2000;
      c.seed = 123;
      c.workers = 1;
      const std::string one = report_to_json(run_experiment(c), false);
      c.workers = 3;
      const std::string three = report_to_json(run_experiment(c), false);
      o.require(one == three, exp + " on " + model);
      ++runs;
    }
  }
  o.detail << runs << " experiment/model pairs, workers 1 vs 3";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 algebraic core", criterion_1},
      {"2 martingale property", criterion_2},
      {"3 Feynman-Kac oracle", criterion_3},
      {"4 Dynkin check", criterion_4},
      {"5 change of measure", criterion_5},
      {"6 reverse identity", criterion_6},
      {"7 generator forms", criterion_7},
      {"8 specializations", criterion_8},
      {"9 tilt invariants", criterion_9},
      {"10 determinism", criterion_10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "error: " << e.what();
    }
    if (!o.passed) ++failures;
    std::printf("%s  criterion %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
