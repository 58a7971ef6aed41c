#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "pdmp/quadrature.hpp"
#include "pdmp/state.hpp"
#include "pdmp/test_function.hpp"

namespace pdmp {

// Source of i.i.d. uniform variates on (0, 1).
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double next() = 0;
};

// Replays a fixed list of variates; throws once exhausted.
class FixedUniforms final : public UniformSource {
 public:
  explicit FixedUniforms(std::vector<double> us) : us_(std::move(us)) {}
  double next() override;

 private:
  std::vector<double> us_;
  std::size_t pos_ = 0;
};

enum class SupportKind { discrete, density_1d, moment_oracle };

struct WeightedState {
  State state;
  double mass;
};

// Transition kernel Q(y, dz) for the post-jump location.
class JumpKernel {
 public:
  virtual ~JumpKernel() = default;

  virtual SupportKind support_kind() const noexcept = 0;
  // A draw from Q(y, .), deterministic in the variates consumed.
  virtual State sample(const State& y, UniformSource& u) const = 0;
  // Qf(y) = int f(z) Q(y, dz).
  virtual double integrate(const State& y, const TestFunction& f) const = 0;
  // Q~(y, dz) = h(z) Q(y, dz) / Qh(y).
  virtual std::shared_ptr<const JumpKernel> tilted(const TestFunction& h) const = 0;
};

using KernelPtr = std::shared_ptr<const JumpKernel>;

// Finitely many destinations per pre-jump state. Sampling inverts the
// cumulative masses in listed order.
class DiscreteKernel final : public JumpKernel {
 public:
  using MassFn = std::function<std::vector<WeightedState>(const State&)>;

  explicit DiscreteKernel(MassFn masses) : masses_(std::move(masses)) {}

  SupportKind support_kind() const noexcept override { return SupportKind::discrete; }
  State sample(const State& y, UniformSource& u) const override;
  double integrate(const State& y, const TestFunction& f) const override;
  KernelPtr tilted(const TestFunction& h) const override;

  std::vector<WeightedState> masses(const State& y) const;

 private:
  MassFn masses_;
};

// Destination z -> place(y, z) for a scalar z with density p(y, z) on
// [lo(y), hi(y)] (hi may be infinite) and inverse CDF for direct sampling.
struct DensitySpec {
  std::function<std::pair<double, double>(const State&)> support;
  std::function<double(const State&, double)> density;
  std::function<double(const State&, double)> inverse_cdf;
  std::function<State(const State&, double)> place;
  // Upper bound on h(place(y, z)) over the support, for the h this kernel will
  // be tilted by. Needed for rejection sampling of the tilted kernel.
  std::function<double(const State&)> tilt_envelope;
  QuadratureOptions quadrature{};
};

class DensityKernel final : public JumpKernel {
 public:
  explicit DensityKernel(DensitySpec spec) : spec_(std::move(spec)) {}

  SupportKind support_kind() const noexcept override { return SupportKind::density_1d; }
  State sample(const State& y, UniformSource& u) const override;
  double integrate(const State& y, const TestFunction& f) const override;
  KernelPtr tilted(const TestFunction& h) const override;

  const DensitySpec& spec() const noexcept { return spec_; }

 private:
  DensitySpec spec_;
};

inline constexpr std::size_t kMaxRejections = 1'000'000;

// Claim kernel of the risk model: y -> y - Z with Z ~ Exp(rate). Integrates
// exponential sums in closed form (moment generating function) and falls back
// to quadrature otherwise. Tilting by a single exponential term is again an
// exponential claim kernel.
class ExponentialClaimKernel final : public JumpKernel {
 public:
  explicit ExponentialClaimKernel(double rate);

  SupportKind support_kind() const noexcept override { return SupportKind::moment_oracle; }
  State sample(const State& y, UniformSource& u) const override;
  double integrate(const State& y, const TestFunction& f) const override;
  KernelPtr tilted(const TestFunction& h) const override;

  double rate() const noexcept { return rate_; }
  // E exp(-r Z) = rate / (rate + r), r > -rate.
  double moment(double r) const;

 private:
  double rate_;
};

// Qh(y), throwing ZeroQh when it vanishes.
double kernel_mass(const JumpKernel& q, const State& y, const TestFunction& h);

}  // namespace pdmp
