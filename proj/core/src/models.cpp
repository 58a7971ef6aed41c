#include "pdmp/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

// ------------------------------------------------------------- bundle

std::size_t CtmcSpec::index_of(int label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    std::ostringstream msg;
    msg << "label " << label << " not in the chain";
    throw Error(ErrorCode::UnsupportedState, msg.str());
  }
  return static_cast<std::size_t>(it - labels.begin());
}

std::vector<double> CtmcSpec::tabulate(const TestFunction& f) const {
  std::vector<double> v;
  v.reserve(labels.size());
  for (int l : labels) v.push_back(f.value(State::labelled(l)));
  return v;
}

const TestFunction& ModelBundle::function(const std::string& name) const {
  const auto it = functions.find(name);
  if (it == functions.end()) {
    std::string known;
    for (const auto& [k, v] : functions) known += " " + k;
    throw Error(ErrorCode::BadConfig,
                "model " + model.name + " has no function '" + name + "' (known:" + known + ")");
  }
  return it->second;
}

Observable ModelBundle::observable(const std::string& name) const {
  if (const auto it = observables.find(name); it != observables.end()) return it->second;
  const TestFunction f = function(name);
  return [f](const Skeleton& sk, const PdmpModel& m, double t) {
    const State y = path_state(sk, m, t);
    return y.is_cemetery() ? 0.0 : f.value(y);
  };
}

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

// Polynomial c x^k along a flow of constant speed v.
TestFunction power_function(std::string name, int k, double v) {
  TestFunction f;
  f.name = std::move(name);
  f.value = [k](const State& y) { return std::pow(y.x(), k); };
  f.path_derivative = [k, v](const State& y) {
    return k == 0 ? 0.0 : v * k * std::pow(y.x(), k - 1);
  };
  return f;
}

void add(ModelBundle& b, TestFunction f) {
  std::string key = f.name;
  b.functions.emplace(std::move(key), std::move(f));
}

void add_one(ModelBundle& b) {
  add(b, TestFunction::constant(1.0));
  b.oracles["one"] = [](double) { return 1.0; };
}

// Classical RK4 for v' = M v on [0, t] with n steps.
std::vector<double> rk4_linear(const std::vector<std::vector<double>>& m, std::vector<double> v,
                               double t, std::size_t n) {
  const std::size_t d = v.size();
  const double dt = t / static_cast<double>(n);
  auto apply = [&](const std::vector<double>& x) {
    std::vector<double> y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) y[i] += m[i][j] * x[j];
    return y;
  };
  std::vector<double> tmp(d);
  for (std::size_t s = 0; s < n; ++s) {
    const auto k1 = apply(v);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
    const auto k2 = apply(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
    const auto k3 = apply(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = v[i] + dt * k3[i];
    const auto k4 = apply(tmp);
    for (std::size_t i = 0; i < d; ++i) v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return v;
}

}  // namespace

TestFunction table_function(std::string name, const std::vector<int>& labels,
                            const std::vector<double>& values) {
  require(labels.size() == values.size(), ErrorCode::BadParameters,
          "table function needs one value per label");
  std::map<int, double> table;
  for (std::size_t i = 0; i < labels.size(); ++i) table[labels[i]] = values[i];
  TestFunction f;
  f.name = std::move(name);
  f.value = [table](const State& y) {
    if (!y.label) throw Error(ErrorCode::UnsupportedState, "table function on an unlabelled state");
    const auto it = table.find(*y.label);
    if (it == table.end()) throw Error(ErrorCode::UnsupportedState, "label outside the table");
    return it->second;
  };
  f.path_derivative = [](const State&) { return 0.0; };
  return f;
}

// --------------------------------------------------------------- CTMC

ModelBundle make_ctmc(const std::vector<int>& labels, const std::vector<double>& rates,
                      const std::vector<std::vector<double>>& masses, int initial_label) {
  const std::size_t d = labels.size();
  require(d > 0 && rates.size() == d && masses.size() == d, ErrorCode::BadStochasticMatrix,
          "labels, rates and mass rows must have equal length");
  CtmcSpec spec{labels, std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0))};
  for (std::size_t i = 0; i < d; ++i) {
    require(std::isfinite(rates[i]) && rates[i] >= 0.0, ErrorCode::BadStochasticMatrix,
            "jump rates must be finite and non-negative");
    require(masses[i].size() == d, ErrorCode::BadStochasticMatrix, "mass row has wrong length");
    if (rates[i] == 0.0) continue;
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      require(masses[i][j] >= 0.0, ErrorCode::BadStochasticMatrix, "negative destination mass");
      total += masses[i][j];
    }
    require(masses[i][i] == 0.0, ErrorCode::BadStochasticMatrix, "self-transition mass must be zero");
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::BadStochasticMatrix,
            "destination masses must sum to one");
    for (std::size_t j = 0; j < d; ++j) spec.generator[i][j] = rates[i] * masses[i][j];
    spec.generator[i][i] = -rates[i];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      require(labels[i] != labels[j], ErrorCode::BadStochasticMatrix, "duplicate label");

  std::map<int, double> rate_of;
  std::map<int, std::vector<WeightedState>> dest;
  for (std::size_t i = 0; i < d; ++i) {
    rate_of[labels[i]] = rates[i];
    if (rates[i] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j)
      if (masses[i][j] > 0.0) dest[labels[i]].push_back({State::labelled(labels[j]), masses[i][j]});
  }
  auto rate = [rate_of](const State& y) {
    if (!y.label) throw Error(ErrorCode::UnsupportedState, "chain state without a label");
    const auto it = rate_of.find(*y.label);
    if (it == rate_of.end()) throw Error(ErrorCode::UnsupportedState, "label outside the chain");
    return it->second;
  };

  ModelBundle b;
  b.model.name = "ctmc";
  b.model.flow = Flow::constant();
  b.model.hazard.measure.density = rate;
  b.model.hazard.measure.continuous_cumulative = [rate](const State& x, double t) {
    return rate(x) * t;
  };
  b.model.kernel = std::make_shared<DiscreteKernel>([dest](const State& y) {
    if (!y.label) throw Error(ErrorCode::UnsupportedState, "chain state without a label");
    const auto it = dest.find(*y.label);
    return it == dest.end() ? std::vector<WeightedState>{} : it->second;
  });
  b.model.descriptor = {0, labels};
  b.x0 = State::labelled(initial_label);
  spec.index_of(initial_label);
  b.ctmc = spec;
  add_one(b);
  b.recommended_h = "one";
  b.documentation = "finite chain with constant flow; any finite non-negative rates";
  return b;
}

namespace {

// e^{G t} v, halving the RK4 step until successive results agree.
std::vector<double> chain_semigroup(const CtmcSpec& spec, const std::vector<double>& v, double t) {
  std::size_t n = 64;
  std::vector<double> prev = rk4_linear(spec.generator, v, t, n);
  for (;;) {
    n *= 2;
    std::vector<double> next = rk4_linear(spec.generator, v, t, n);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      worst = std::max(worst, std::abs(next[i] - prev[i]) / std::max(1.0, std::abs(next[i])));
    if (worst <= 1e-12 || n > (1u << 20)) return next;
    prev = std::move(next);
  }
}

const std::vector<int> kChain3Labels{0, 1, 2};
const std::vector<double> kChain3Rates{1.0, 2.0, 1.5};
const std::vector<std::vector<double>> kChain3Masses{{0.0, 0.6, 0.4}, {0.5, 0.0, 0.5}, {0.3, 0.7, 0.0}};

void add_chain3_functions(ModelBundle& b) {
  add(b, table_function("f", kChain3Labels, {1.0, -2.0, 3.0}));
  add(b, table_function("g", kChain3Labels, {0.5, 1.5, -1.0}));
  add(b, table_function("h", kChain3Labels, {1.0, 2.0, 0.5}));
  add(b, table_function("h2", kChain3Labels, {3.0, 1.0, 2.0}));
  b.recommended_h = "h";
}

// Post-jump law of the clocked chain: label j with mass p_ij, then a fresh
// Exp(rate_j) clock.
class ClockedChainKernel final : public JumpKernel {
 public:
  using Rows = std::map<int, std::vector<std::pair<int, double>>>;

  ClockedChainKernel(Rows rows, std::map<int, double> rates)
      : rows_(std::move(rows)), rates_(std::move(rates)) {}

  SupportKind support_kind() const noexcept override { return SupportKind::density_1d; }

  State sample(const State& y, UniformSource& u) const override {
    const auto& row = row_of(y);
    const double a = u.next();
    const double b = u.next();
    double acc = 0.0;
    int j = row.back().first;
    for (const auto& [label, mass] : row) {
      acc += mass;
      if (a < acc) {
        j = label;
        break;
      }
    }
    return State::interior({-std::log(b) / rates_.at(j)}, j);
  }

  double integrate(const State& y, const TestFunction& f) const override {
    double total = 0.0;
    for (const auto& [j, mass] : row_of(y)) {
      const double rate = rates_.at(j);
      // Substituting u = exp(-rate tau) turns the clock law into a uniform.
      const auto g = [&](double v) { return f.value(State::interior({-std::log(v) / rate}, j)); };
      total += mass * integrate_adaptive(g, 0.0, 1.0).value;
    }
    return total;
  }

  // Only clock-independent h: the tilt then reweights the label masses.
  KernelPtr tilted(const TestFunction& h) const override {
    Rows tilted_rows;
    for (const auto& [i, row] : rows_) {
      double total = 0.0;
      std::vector<std::pair<int, double>> out;
      for (const auto& [j, mass] : row) {
        const double hj = h.value(State::interior({0.0}, j));
        for (double tau : {0.25, 1.0, 4.0})
          if (h.value(State::interior({tau / rates_.at(j)}, j)) != hj)
            throw Error(ErrorCode::MissingEnvelope, "clocked chain tilt needs h independent of the clock");
        out.emplace_back(j, mass * hj);
        total += mass * hj;
      }
      if (!(total > 0.0)) throw Error(ErrorCode::ZeroQh, "Qh = 0 in the clocked chain");
      for (auto& entry : out) entry.second /= total;
      tilted_rows[i] = std::move(out);
    }
    return std::make_shared<ClockedChainKernel>(std::move(tilted_rows), rates_);
  }

 private:
  const std::vector<std::pair<int, double>>& row_of(const State& y) const {
    if (y.is_cemetery() || !y.label) throw Error(ErrorCode::UnsupportedState, "clocked chain needs a label");
    const auto it = rows_.find(*y.label);
    if (it == rows_.end()) throw Error(ErrorCode::UnsupportedState, "label outside the chain");
    return it->second;
  }

  Rows rows_;
  std::map<int, double> rates_;
};

}  // namespace

ModelBundle make_ctmc3() {
  ModelBundle b = make_ctmc(kChain3Labels, kChain3Rates, kChain3Masses, 0);
  b.model.name = "ctmc3";
  add_chain3_functions(b);
  for (const std::string name : {"f", "g"}) {
    b.oracles[name] = [spec = *b.ctmc, f = b.functions.at(name)](double t) {
      return chain_semigroup(spec, spec.tabulate(f), t)[0];
    };
  }
  b.parameters = {{"rate0", 1.0}, {"rate1", 2.0}, {"rate2", 1.5}};
  b.documentation =
      "three-state chain, rates (1, 2, 1.5), starts in state 0; functions f, g, h, h2 are "
      "tables over the states";
  return b;
}

ModelBundle make_ctmc3_clocked(double clock0) {
  require(std::isfinite(clock0) && clock0 > 0.0, ErrorCode::BadParameters, "clock0 must be positive");
  const ModelBundle chain = make_ctmc3();
  ClockedChainKernel::Rows rows;
  std::map<int, double> rates;
  for (std::size_t i = 0; i < kChain3Labels.size(); ++i) {
    rates[kChain3Labels[i]] = kChain3Rates[i];
    for (std::size_t j = 0; j < kChain3Labels.size(); ++j)
      if (kChain3Masses[i][j] > 0.0) rows[kChain3Labels[i]].emplace_back(kChain3Labels[j], kChain3Masses[i][j]);
  }

  ModelBundle b;
  b.model.name = "ctmc3-clock";
  b.model.flow = Flow([](const State& x, double t) { return State::interior({x.x() - t}, x.label); },
                      [](const State& x) { return x.x(); },
                      [](const State& x) { return State::boundary({0.0}, x.label); });
  b.model.hazard.measure.density = [](const State&) { return 0.0; };
  b.model.hazard.measure.continuous_cumulative = [](const State&, double) { return 0.0; };
  b.model.hazard.measure.atoms = [](const State& x, double lo, double hi) {
    const double c = x.x();
    if (c > lo && c <= hi) return std::vector<Atom>{{c, 1.0}};
    return std::vector<Atom>{};
  };
  b.model.kernel = std::make_shared<ClockedChainKernel>(std::move(rows), std::move(rates));
  b.model.descriptor = {1, kChain3Labels};
  b.x0 = State::interior({clock0}, 0);
  add_one(b);
  add_chain3_functions(b);
  // Deterministic first holding time, then the chain from the law of the first jump.
  for (const std::string name : {"f", "g"}) {
    b.oracles[name] = [spec = *chain.ctmc, f = b.functions.at(name), clock0](double t) {
      const std::vector<double> v = spec.tabulate(f);
      if (t < clock0) return v[0];
      const std::vector<double> w = chain_semigroup(spec, v, t - clock0);
      double out = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) out += kChain3Masses[0][j] * w[j];
      return out;
    };
  }
  b.parameters = {{"clock0", clock0}};
  b.documentation =
      "the three-state chain with a countdown clock: state (label, clock), the clock runs down "
      "at unit speed and a forced jump at zero draws the next label and an Exp(rate) clock; "
      "the first clock is clock0 > 0";
  return b;
}

ModelBundle make_ctmc2(double lambda0) {
  require(std::isfinite(lambda0) && lambda0 >= 0.0, ErrorCode::BadParameters,
          "lambda0 must be finite and non-negative");
  const std::vector<int> labels{0, 1};
  ModelBundle b = make_ctmc(labels, {lambda0, lambda0}, {{0.0, 1.0}, {1.0, 0.0}}, 0);
  b.model.name = "ctmc2";
  add(b, table_function("occ0", labels, {1.0, 0.0}));
  add(b, table_function("h", labels, {1.0, 3.0}));
  b.recommended_h = "h";
  b.oracles["occ0"] = [lambda0](double t) { return 0.5 * (1.0 + std::exp(-2.0 * lambda0 * t)); };
  b.parameters = {{"lambda0", lambda0}};
  b.documentation = "two-state chain with symmetric rate lambda0 >= 0, starts in state 0";
  return b;
}

double ctmc_feynman_kac_oracle(const ModelBundle& bundle, const TestFunction& h,
                               const TestFunction& g, double t) {
  if (!bundle.ctmc) throw Error(ErrorCode::UnsupportedState, "oracle needs a finite state space");
  require(std::isfinite(t) && t >= 0.0, ErrorCode::BadParameters, "oracle time must be finite");
  const CtmcSpec& spec = *bundle.ctmc;
  const std::size_t d = spec.size();
  const std::vector<double> hv = spec.tabulate(h);
  const std::vector<double> gv = spec.tabulate(g);
  std::vector<std::vector<double>> m = spec.generator;
  std::vector<double> v0(d);
  double scale = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    require(hv[i] > 0.0, ErrorCode::DomainViolation, "h must be strictly positive");
    double gh = 0.0;
    for (std::size_t j = 0; j < d; ++j) gh += spec.generator[i][j] * hv[j];
    m[i][i] -= gh / hv[i];
    v0[i] = gv[i] * hv[i];
    for (std::size_t j = 0; j < d; ++j) scale = std::max(scale, std::abs(m[i][j]));
  }
  const std::size_t i0 = spec.index_of(*bundle.x0.label);
  if (t == 0.0) return gv[i0];

  std::size_t n = static_cast<std::size_t>(std::ceil(4.0 * scale * t)) + 16;
  double prev = rk4_linear(m, v0, t, n)[i0];
  while (n < (std::size_t{1} << 24)) {
    n *= 2;
    const double next = rk4_linear(m, v0, t, n)[i0];
    if (!std::isfinite(next)) break;
    if (std::abs(next - prev) <= 1e-10 * std::max(1e-300, std::abs(next)) ||
        std::abs(next - prev) <= 1e-14)
      return next / hv[i0];
    prev = next;
  }
  throw Error(ErrorCode::StiffnessFailure, "Feynman-Kac integration did not converge");
}

// ------------------------------------------------------ Cramer-Lundberg

double cl_kappa(double c, double lambda, double mu, double theta) {
  require(theta < mu, ErrorCode::BadParameters, "theta must be below mu");
  return -theta * c + lambda * (mu / (mu - theta) - 1.0);
}

double lundberg_exponent(double c, double lambda, double mu) {
  require(c > 0.0 && lambda > 0.0 && mu > 0.0 && c * mu > lambda, ErrorCode::BadParameters,
          "a positive Lundberg exponent needs c mu > lambda");
  return mu - lambda / c;
}

double ruin_indicator(const Skeleton& sk, double t) {
  for (const JumpEvent& e : sk.events) {
    if (e.time > t) break;
    if (!e.post.is_cemetery() && e.post.x() < 0.0) return 1.0;
  }
  return sk.x0.x() < 0.0 ? 1.0 : 0.0;
}

ModelBundle make_cramer_lundberg(double c, double lambda, double mu, double u0, double theta) {
  require(c > 0.0 && lambda >= 0.0 && mu > 0.0 && std::isfinite(c) && std::isfinite(lambda) &&
              std::isfinite(mu) && std::isfinite(u0),
          ErrorCode::BadParameters, "Cramer-Lundberg needs c, mu > 0 and lambda >= 0");
  require(theta < mu, ErrorCode::BadParameters, "theta must be below mu");
  ModelBundle b;
  b.model.name = "cramer-lundberg";
  b.model.flow = Flow::translation({c});
  b.model.hazard = HazardLaw::constant(lambda);
  b.model.kernel = std::make_shared<ExponentialClaimKernel>(mu);
  b.model.descriptor = {1, {}};
  b.x0 = State::interior({u0});
  add_one(b);
  add(b, power_function("x", 1, c));
  add(b, power_function("x2", 2, c));
  add(b, TestFunction::exponential("exp", ExponentialSum{{{1.0, -theta}}}, c));
  b.recommended_h = "exp";
  b.observables["ruin"] = [](const Skeleton& sk, const PdmpModel&, double t) {
    return ruin_indicator(sk, t);
  };
  b.oracles["x"] = [=](double t) { return u0 + (c - lambda / mu) * t; };
  b.oracles["x2"] = [=](double t) {
    const double m = u0 + (c - lambda / mu) * t;
    return m * m + 2.0 * lambda * t / (mu * mu);
  };
  b.oracles["exp"] = [=](double t) {
    return std::exp(-theta * u0 + cl_kappa(c, lambda, mu, theta) * t);
  };
  b.parameters = {{"c", c}, {"lambda", lambda}, {"mu", mu}, {"u0", u0}, {"theta", theta}};
  b.documentation =
      "reserve u0 + c t minus Exp(mu) claims at rate lambda; c, mu > 0, lambda >= 0, theta < mu; "
      "h = exp(-theta x)";
  return b;
}

// ------------------------------------------------------- boundary reset

namespace {

constexpr double kStepAt = 0.5;
constexpr double kStepTol = 1e-12;

// E_r f(X_t) for deterministic reset r by the renewal equation, trapezoid
// rule on a grid whose step divides the cycle length 1 - r.
class RenewalOracle {
 public:
  RenewalOracle(double lambda0, double r, TestFunction f) : lam_(lambda0), r_(r), f_(std::move(f)) {
    cycle_ = 1.0 - r_;
    m_ = static_cast<std::size_t>(std::ceil(cycle_ / 2.5e-4));
    k_ = cycle_ / static_cast<double>(m_);
  }

  double operator()(double x0, double t) {
    grow(t + k_);
    const double c0 = 1.0 - x0;
    double v = t < c0 ? f_.value(State::interior({x0 + t})) * std::exp(-lam_ * t) : 0.0;
    if (t >= c0) v += std::exp(-lam_ * c0) * ur(t - c0);
    const double upper = std::min(t, c0);
    if (lam_ > 0.0 && upper > 0.0) {
      const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(upper / k_)) * 4);
      const double ds = upper / static_cast<double>(n);
      double s = 0.0;
      for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        const double sj = ds * static_cast<double>(j);
        s += w * lam_ * std::exp(-lam_ * sj) * ur(t - sj);
      }
      v += s * ds;
    }
    return v;
  }

 private:
  double ur(double tau) const {
    const double pos = tau / k_;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= u_.size()) return u_.back();
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * u_[i] + w * u_[i + 1];
  }

  void grow(double t) {
    const auto need = static_cast<std::size_t>(std::ceil(t / k_)) + 2;
    while (u_.size() < need) {
      const std::size_t n = u_.size();
      const double tn = k_ * static_cast<double>(n);
      double a = tn < cycle_ - 0.5 * k_ ? f_.value(State::interior({r_ + tn})) * std::exp(-lam_ * tn) : 0.0;
      if (n >= m_) a += std::exp(-lam_ * cycle_) * u_[n - m_];
      if (n == 0 || lam_ == 0.0) {
        u_.push_back(a);
        continue;
      }
      const std::size_t m = std::min(n, m_);
      double conv = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const double w = j == m ? 0.5 : 1.0;
        conv += w * std::exp(-lam_ * k_ * static_cast<double>(j)) * u_[n - j];
      }
      u_.push_back((a + k_ * lam_ * conv) / (1.0 - 0.5 * k_ * lam_));
    }
  }

  double lam_;
  double r_;
  TestFunction f_;
  double cycle_;
  std::size_t m_;
  double k_;
  std::vector<double> u_;
};

}  // namespace

ModelBundle make_boundary_reset(double lambda0, std::vector<ResetPoint> reset, double x0) {
  require(std::isfinite(lambda0) && lambda0 >= 0.0, ErrorCode::BadParameters,
          "lambda0 must be finite and non-negative");
  require(x0 >= 0.0 && x0 < 1.0, ErrorCode::BadParameters, "x0 must lie in [0, 1)");
  require(!reset.empty(), ErrorCode::BadParameters, "reset distribution is empty");
  double total = 0.0;
  for (const ResetPoint& p : reset) {
    require(p.x >= 0.0 && p.x < 1.0 && p.mass > 0.0, ErrorCode::BadParameters,
            "reset points must lie in [0, 1) with positive mass");
    total += p.mass;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::BadParameters, "reset masses must sum to one");

  ModelBundle b;
  b.model.name = "boundary-reset";
  b.model.flow = Flow([](const State& x, double t) { return State::interior({x.x() + t}); },
                      [](const State& x) { return 1.0 - x.x(); },
                      [](const State&) { return State::boundary({1.0}); });
  b.model.hazard = HazardLaw::constant(lambda0);
  b.model.hazard.measure.atoms = [](const State& x, double lo, double hi) {
    const double c = 1.0 - x.x();
    if (c > lo && c <= hi) return std::vector<Atom>{{c, 1.0}};
    return std::vector<Atom>{};
  };
  std::vector<WeightedState> dest;
  for (const ResetPoint& p : reset) dest.push_back({State::interior({p.x}), p.mass});
  b.model.kernel = std::make_shared<DiscreteKernel>([dest](const State&) { return dest; });
  b.model.descriptor = {1, {}};
  b.x0 = State::interior({x0});

  add_one(b);
  add(b, power_function("x", 1, 1.0));
  add(b, power_function("x2", 2, 1.0));
  {
    TestFunction f = TestFunction::plain("lin", [](const State& y) { return 1.0 + y.x(); });
    f.path_derivative = [](const State&) { return 1.0; };
    add(b, f);
  }
  {
    TestFunction f = TestFunction::plain(
        "cos", [](const State& y) { return 2.0 + std::cos(2.0 * std::numbers::pi * y.x()); });
    f.path_derivative = [](const State& y) {
      return -2.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * y.x());
    };
    add(b, f);
  }
  {
    TestFunction f = TestFunction::plain(
        "step", [](const State& y) { return y.x() >= kStepAt - kStepTol ? 2.0 : 1.0; });
    f.path_derivative = [](const State&) { return 0.0; };
    f.path_jumps = [](const State& x, double lo, double hi) {
      std::vector<Atom> out;
      if (x.x() < kStepAt - kStepTol) {
        const double s = kStepAt - x.x();
        if (s > lo && s <= hi) out.push_back({s, 1.0});
      }
      return out;
    };
    add(b, f);
  }
  b.recommended_h = "lin";

  if (reset.size() == 1) {
    const double r = reset[0].x;
    for (const std::string name : {"x", "x2", "lin", "cos", "step"}) {
      auto oracle = std::make_shared<RenewalOracle>(lambda0, r, b.functions.at(name));
      b.oracles[name] = [oracle, x0](double t) { return (*oracle)(x0, t); };
    }
  }
  b.parameters = {{"lambda0", lambda0}, {"x0", x0}};
  if (reset.size() == 1) b.parameters["reset"] = reset[0].x;
  b.documentation =
      "unit drift on [0, 1), jump rate lambda0 >= 0 plus a forced jump at 1, jumps land on the "
      "reset distribution in [0, 1)";
  return b;
}

ModelBundle make_boundary_reset(double lambda0, double reset, double x0) {
  return make_boundary_reset(lambda0, std::vector<ResetPoint>{{reset, 1.0}}, x0);
}

// ---------------------------------------------------------------- AIMD

ModelBundle make_aimd(double growth, double cut, double loss_base, double loss_slope, double w0,
                      double eta) {
  require(cut > 0.0 && cut < 1.0, ErrorCode::BadParameters, "cut must lie in (0, 1)");
  require(growth > 0.0 && std::isfinite(growth), ErrorCode::BadParameters, "growth must be positive");
  require(loss_base >= 0.0 && loss_slope >= 0.0 && std::isfinite(loss_base) &&
              std::isfinite(loss_slope),
          ErrorCode::BadParameters, "loss rate coefficients must be non-negative");
  require(w0 >= 0.0 && std::isfinite(w0), ErrorCode::BadParameters, "w0 must be non-negative");

  ModelBundle b;
  b.model.name = "aimd";
  b.model.flow = Flow::translation({growth});
  b.model.hazard.measure.density = [loss_base, loss_slope](const State& y) {
    return loss_base + loss_slope * y.x();
  };
  b.model.hazard.measure.continuous_cumulative = [=](const State& x, double t) {
    return loss_base * t + loss_slope * (x.x() * t + 0.5 * growth * t * t);
  };
  b.model.kernel = std::make_shared<DiscreteKernel>([cut](const State& y) {
    return std::vector<WeightedState>{{State::interior({cut * y.x()}), 1.0}};
  });
  b.model.descriptor = {1, {}};
  b.x0 = State::interior({w0});

  add_one(b);
  add(b, power_function("w", 1, growth));
  add(b, power_function("w2", 2, growth));
  add(b, power_function("w3", 3, growth));
  add(b, TestFunction::exponential("exp", ExponentialSum{{{1.0, eta}}}, growth));
  b.recommended_h = "exp";

  if (loss_slope == 0.0) {
    // d/dt E w^k = k growth E w^{k-1} + loss (cut^k - 1) E w^k
    std::vector<std::vector<double>> m(4, std::vector<double>(4, 0.0));
    for (int k = 1; k <= 3; ++k) {
      m[k][k - 1] = k * growth;
      m[k][k] = loss_base * (std::pow(cut, k) - 1.0);
    }
    const std::vector<double> v0{1.0, w0, w0 * w0, w0 * w0 * w0};
    const char* names[] = {"w", "w2", "w3"};
    for (int k = 1; k <= 3; ++k) {
      b.oracles[names[k - 1]] = [m, v0, k](double t) {
        const std::size_t n = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(t * 400.0)));
        return rk4_linear(m, v0, t, n)[static_cast<std::size_t>(k)];
      };
    }
  }
  b.parameters = {{"growth", growth}, {"cut", cut},   {"loss", loss_base},
                  {"slope", loss_slope}, {"w0", w0}, {"eta", eta}};
  b.documentation =
      "window w0 + growth t cut to cut w at losses of rate loss + slope w; growth > 0, "
      "0 < cut < 1, loss, slope >= 0; h = exp(eta w)";
  return b;
}

// ------------------------------------------------------------- registry

namespace {

double take(std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  const double v = it->second;
  p.erase(it);
  return v;
}

}  // namespace

std::vector<std::string> bundle_names() {
  return {"ctmc3", "ctmc2", "cramer-lundberg", "boundary-reset", "aimd", "ctmc3-clock"};
}

ModelBundle make_bundle(const std::string& name, const std::map<std::string, double>& params) {
  std::map<std::string, double> p = params;
  ModelBundle b;
  if (name == "ctmc3") {
    b = make_ctmc3();
  } else if (name == "ctmc3-clock") {
    b = make_ctmc3_clocked(take(p, "clock0", 0.5));
  } else if (name == "ctmc2") {
    b = make_ctmc2(take(p, "lambda0", 1.0));
  } else if (name == "cramer-lundberg" || name == "cl") {
    const double c = take(p, "c", 1.0);
    const double lambda = take(p, "lambda", 1.0);
    const double mu = take(p, "mu", 2.0);
    const double u0 = take(p, "u0", 1.0);
    const double theta = take(p, "theta", 0.5);
    b = make_cramer_lundberg(c, lambda, mu, u0, theta);
  } else if (name == "boundary-reset") {
    const double lambda0 = take(p, "lambda0", 0.5);
    const double reset = take(p, "reset", 0.0);
    const double x0 = take(p, "x0", 0.3);
    b = make_boundary_reset(lambda0, reset, x0);
  } else if (name == "aimd") {
    const double growth = take(p, "growth", 1.0);
    const double cut = take(p, "cut", 0.5);
    const double loss = take(p, "loss", 0.8);
    const double slope = take(p, "slope", 0.0);
    const double w0 = take(p, "w0", 1.0);
    const double eta = take(p, "eta", 0.3);
    b = make_aimd(growth, cut, loss, slope, w0, eta);
  } else {
    throw Error(ErrorCode::BadConfig, "unknown model '" + name + "'");
  }
  if (!p.empty()) throw Error(ErrorCode::BadConfig, "unknown parameter '" + p.begin()->first + "' for " + name);
  return b;
}

}  // namespace pdmp
