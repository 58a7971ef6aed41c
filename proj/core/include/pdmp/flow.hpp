#pragma once

#include <functional>
#include <limits>

#include "pdmp/state.hpp"

namespace pdmp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Semi-dynamic system phi_x(t) with exit horizon c(x) and the limit state
// phi_x(c(x)) on the exit boundary.
class Flow {
 public:
  using EvalFn = std::function<State(const State&, double)>;
  using HorizonFn = std::function<double(const State&)>;
  using LimitFn = std::function<State(const State&)>;

  Flow() = default;
  explicit Flow(EvalFn eval, HorizonFn horizon = {}, LimitFn boundary_limit = {})
      : eval_(std::move(eval)), horizon_(std::move(horizon)), limit_(std::move(boundary_limit)) {}

  // phi_x(t) for 0 <= t < c(x); no range checks.
  State raw(const State& x, double t) const { return eval_(x, t); }
  double horizon(const State& x) const { return horizon_ ? horizon_(x) : kInfinity; }
  // Throws HorizonExceeded when the model does not supply a boundary limit.
  State boundary_limit(const State& x) const;

  // Constant flow phi_x(t) = x.
  static Flow constant();
  // phi_x(t) = x + v t on every coordinate, never exits.
  static Flow translation(Coords velocity);

 private:
  EvalFn eval_;
  HorizonFn horizon_;
  LimitFn limit_;
};

// Relative slack within which a time at the horizon is snapped onto it.
inline constexpr double kHorizonSlack = 1e-12;

// phi_x(t), returning the boundary limit at t = c(x) < inf.
// Errors: CemeteryInput, HorizonExceeded (t > c(x) or t < 0).
State flow_eval(const Flow& flow, const State& x, double t);

}  // namespace pdmp
