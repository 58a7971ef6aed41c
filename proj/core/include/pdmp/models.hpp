#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/model.hpp"
#include "pdmp/test_function.hpp"

namespace pdmp {

// Real-valued functional of a path on [0, t].
using Observable = std::function<double(const Skeleton&, const PdmpModel&, double t)>;

// Finite state space view of a constant-flow model: state i carries label
// labels[i] and G is the generator matrix (rows sum to zero).
struct CtmcSpec {
  std::vector<int> labels;
  std::vector<std::vector<double>> generator;

  std::size_t index_of(int label) const;
  std::size_t size() const noexcept { return labels.size(); }
  // f(labels[i]) for every i.
  std::vector<double> tabulate(const TestFunction& f) const;
};

struct ModelBundle {
  PdmpModel model;
  State x0;
  std::string recommended_h;
  // Candidate h and f/g functions by name.
  std::map<std::string, TestFunction> functions;
  // Path observables beyond f(X_t).
  std::map<std::string, Observable> observables;
  // Closed-form or ODE oracles t -> E_{x0} f(X_t), keyed by function name.
  std::map<std::string, std::function<double(double)>> oracles;
  std::optional<CtmcSpec> ctmc;
  std::map<std::string, double> parameters;
  std::string documentation;

  const TestFunction& function(const std::string& name) const;
  const TestFunction& h() const { return function(recommended_h); }
  // f(X_t) for a named function, or a named observable.
  Observable observable(const std::string& name) const;
};

// Constant flow chain with jump rates[i] out of labels[i] and destination
// masses[i][j]. Rows of states with rate 0 are ignored.
// Errors: BadStochasticMatrix.
ModelBundle make_ctmc(const std::vector<int>& labels, const std::vector<double>& rates,
                      const std::vector<std::vector<double>>& masses, int initial_label);

// The bundled three-state chain with functions f, g, h, h2.
ModelBundle make_ctmc3();
// The same chain as a quasi-step process: state (label, clock), the clock runs
// down at unit speed and hits zero in a forced jump, which draws the next label
// and a fresh Exp(rate) clock. The first clock is clock0.
ModelBundle make_ctmc3_clocked(double clock0 = 0.5);
// Two states with symmetric rate lambda0.
ModelBundle make_ctmc2(double lambda0);

// Function on a finite label set, constant along the (constant) flow.
TestFunction table_function(std::string name, const std::vector<int>& labels,
                            const std::vector<double>& values);

// E_{x0}[g(X_t) M^h_t] for a CTMC bundle from v' = (G - V) v, V = Gh / h,
// v(0) = g h; the answer is v(t)[x0] / h(x0). RK4 with the step halved until
// two successive results agree to 1e-10 relative. Errors: StiffnessFailure,
// UnsupportedState for bundles without a CtmcSpec.
double ctmc_feynman_kac_oracle(const ModelBundle& bundle, const TestFunction& h,
                               const TestFunction& g, double t);

// Reserve x + c t with Exp(mu) claims at rate lambda. Functions x, x2 and
// exp = e^{-theta x}. Errors: BadParameters.
ModelBundle make_cramer_lundberg(double c, double lambda, double mu, double u0,
                                 double theta = 0.5);

// -theta c + lambda (mu / (mu - theta) - 1).
double cl_kappa(double c, double lambda, double mu, double theta);
// Positive root r = mu - lambda / c of cl_kappa. Errors: BadParameters when c mu <= lambda.
double lundberg_exponent(double c, double lambda, double mu);
// 1 when some post-jump reserve in (0, t] is negative.
double ruin_indicator(const Skeleton& sk, double t);

struct ResetPoint {
  double x;
  double mass;
};

// Unit drift on [0, 1) with rate lambda0 and a forced jump at 1; jumps land
// on the reset distribution. Functions x, x2, lin = 1 + x, cos = 2 + cos(2 pi x),
// step = 1 + 1{x >= 1/2}. Errors: BadParameters.
ModelBundle make_boundary_reset(double lambda0, std::vector<ResetPoint> reset, double x0 = 0.3);
ModelBundle make_boundary_reset(double lambda0, double reset, double x0 = 0.3);

// Window w + growth t, loss rate base + slope w, cut w -> cut w. Functions
// w, w2, w3 and exp = e^{eta w}. Errors: BadParameters.
ModelBundle make_aimd(double growth, double cut, double loss_base, double loss_slope = 0.0,
                      double w0 = 1.0, double eta = 0.3);

// Bundle by name with parameter overrides. Names: ctmc3, ctmc2, cramer-lundberg,
// boundary-reset, aimd, ctmc3-clock. Errors: BadConfig.
ModelBundle make_bundle(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> bundle_names();

}  // namespace pdmp
