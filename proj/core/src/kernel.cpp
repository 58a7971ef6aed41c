#include "pdmp/kernel.hpp"

#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

double FixedUniforms::next() {
  if (pos_ >= us_.size()) throw Error(ErrorCode::BadParameters, "fixed variate list exhausted");
  return us_[pos_++];
}

double kernel_mass(const JumpKernel& q, const State& y, const TestFunction& h) {
  const double qh = q.integrate(y, h);
  if (!(qh != 0.0) || !std::isfinite(qh)) {
    std::ostringstream msg;
    msg << "Qh = " << qh << " at " << y;
    throw Error(ErrorCode::ZeroQh, msg.str());
  }
  return qh;
}

// ---------------------------------------------------------------- discrete

std::vector<WeightedState> DiscreteKernel::masses(const State& y) const {
  if (y.is_cemetery()) throw Error(ErrorCode::UnsupportedState, "kernel at cemetery");
  std::vector<WeightedState> m = masses_(y);
  if (m.empty()) {
    std::ostringstream msg;
    msg << "no destinations from " << y;
    throw Error(ErrorCode::UnsupportedState, msg.str());
  }
  return m;
}

State DiscreteKernel::sample(const State& y, UniformSource& u) const {
  const std::vector<WeightedState> m = masses(y);
  const double v = u.next();
  double cum = 0.0;
  for (const WeightedState& w : m) {
    cum += w.mass;
    if (v < cum) return w.state;
  }
  // Rounding left v above the final cumulative mass.
  for (auto it = m.rbegin(); it != m.rend(); ++it)
    if (it->mass > 0.0) return it->state;
  return m.back().state;
}

double DiscreteKernel::integrate(const State& y, const TestFunction& f) const {
  double s = 0.0;
  for (const WeightedState& w : masses(y)) s += w.mass * f.value(w.state);
  return s;
}

KernelPtr DiscreteKernel::tilted(const TestFunction& h) const {
  return std::make_shared<DiscreteKernel>([base = masses_, h](const State& y) {
    std::vector<WeightedState> m = base(y);
    double total = 0.0;
    for (WeightedState& w : m) {
      w.mass *= h.value(w.state);
      total += w.mass;
    }
    if (!(total > 0.0)) {
      std::ostringstream msg;
      msg << "Qh = " << total << " at " << y;
      throw Error(ErrorCode::ZeroQh, msg.str());
    }
    for (WeightedState& w : m) w.mass /= total;
    return m;
  });
}

// ----------------------------------------------------------------- density

namespace {

double integrate_density(const DensitySpec& spec, const State& y,
                         const std::function<double(double)>& weight) {
  if (y.is_cemetery()) throw Error(ErrorCode::UnsupportedState, "kernel at cemetery");
  const auto [lo, hi] = spec.support(y);
  auto g = [&](double z) {
    const double p = spec.density(y, z);
    return p == 0.0 ? 0.0 : p * weight(z);
  };
  if (std::isfinite(hi)) return integrate_adaptive(g, lo, hi, spec.quadrature).value;
  return integrate_semi_infinite(g, lo, spec.quadrature).value;
}

class TiltedDensityKernel final : public JumpKernel {
 public:
  TiltedDensityKernel(DensitySpec spec, TestFunction h) : spec_(std::move(spec)), h_(std::move(h)) {}

  SupportKind support_kind() const noexcept override { return SupportKind::density_1d; }

  State sample(const State& y, UniformSource& u) const override {
    const double envelope = spec_.tilt_envelope(y);
    for (std::size_t i = 0; i < kMaxRejections; ++i) {
      const double z = spec_.inverse_cdf(y, u.next());
      State dest = spec_.place(y, z);
      const double hz = h_.value(dest);
      if (hz > envelope) {
        std::ostringstream msg;
        msg << "tilt envelope " << envelope << " below h = " << hz << " at " << dest;
        throw Error(ErrorCode::MissingEnvelope, msg.str());
      }
      if (u.next() * envelope <= hz) return dest;
    }
    throw Error(ErrorCode::MissingEnvelope, "rejection sampler exceeded its attempt budget");
  }

  double integrate(const State& y, const TestFunction& f) const override {
    const double qh = integrate_density(spec_, y, [&](double z) { return h_.value(spec_.place(y, z)); });
    if (!(qh > 0.0)) throw Error(ErrorCode::ZeroQh, "tilted density kernel with Qh = 0");
    const double num = integrate_density(spec_, y, [&](double z) {
      const State dest = spec_.place(y, z);
      return f.value(dest) * h_.value(dest);
    });
    return num / qh;
  }

  KernelPtr tilted(const TestFunction&) const override {
    throw Error(ErrorCode::MissingEnvelope, "tilted density kernel has no envelope for a second tilt");
  }

 private:
  DensitySpec spec_;
  TestFunction h_;
};

}  // namespace

State DensityKernel::sample(const State& y, UniformSource& u) const {
  if (y.is_cemetery()) throw Error(ErrorCode::UnsupportedState, "kernel at cemetery");
  return spec_.place(y, spec_.inverse_cdf(y, u.next()));
}

double DensityKernel::integrate(const State& y, const TestFunction& f) const {
  return integrate_density(spec_, y, [&](double z) { return f.value(spec_.place(y, z)); });
}

KernelPtr DensityKernel::tilted(const TestFunction& h) const {
  if (!spec_.tilt_envelope)
    throw Error(ErrorCode::MissingEnvelope, "density kernel tilted without a tilt envelope");
  return std::make_shared<TiltedDensityKernel>(spec_, h);
}

// ---------------------------------------------------------- exponential claim

ExponentialClaimKernel::ExponentialClaimKernel(double rate) : rate_(rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::BadParameters, "claim rate must be positive");
}

double ExponentialClaimKernel::moment(double r) const {
  if (!(rate_ + r > 0.0)) {
    std::ostringstream msg;
    msg << "E exp(-" << r << " Z) diverges for claim rate " << rate_;
    throw Error(ErrorCode::MissingOracle, msg.str());
  }
  return rate_ / (rate_ + r);
}

State ExponentialClaimKernel::sample(const State& y, UniformSource& u) const {
  if (y.is_cemetery() || y.coords.empty())
    throw Error(ErrorCode::UnsupportedState, "claim kernel needs a reserve coordinate");
  State z = y;
  z.tag = StateTag::interior;
  z.coords[0] -= -std::log(u.next()) / rate_;
  return z;
}

double ExponentialClaimKernel::integrate(const State& y, const TestFunction& f) const {
  if (y.is_cemetery() || y.coords.empty())
    throw Error(ErrorCode::UnsupportedState, "claim kernel needs a reserve coordinate");
  if (f.exp_form) {
    double v = 0.0;
    for (const ExpTerm& t : f.exp_form->terms)
      v += t.coef * (t.rate == 0.0 ? 1.0 : std::exp(t.rate * y.x()) * moment(t.rate));
    return v;
  }
  State dest = y;
  dest.tag = StateTag::interior;
  auto g = [&](double z) {
    dest.coords[0] = y.coords[0] - z;
    return rate_ * std::exp(-rate_ * z) * f.value(dest);
  };
  return integrate_semi_infinite(g, 0.0).value;
}

KernelPtr ExponentialClaimKernel::tilted(const TestFunction& h) const {
  if (!h.exp_form || h.exp_form->terms.size() != 1 || !(h.exp_form->terms[0].coef > 0.0))
    throw Error(ErrorCode::MissingEnvelope,
                "exponential claim kernel tilts only by a positive single exponential");
  const double r = h.exp_form->terms[0].rate;
  if (!(rate_ + r > 0.0)) throw Error(ErrorCode::ZeroQh, "tilt moment diverges");
  return std::make_shared<ExponentialClaimKernel>(rate_ + r);
}

}  // namespace pdmp
