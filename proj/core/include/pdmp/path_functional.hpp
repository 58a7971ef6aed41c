#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "pdmp/flow.hpp"
#include "pdmp/quadrature.hpp"
#include "pdmp/state.hpp"

namespace pdmp {

// A jump of an additive functional at time `offset` after the trajectory start.
struct Atom {
  double offset;
  double value;
};

// Atoms of a(x, .) with offsets in (lo, hi], sorted by offset. Locations move
// with the start state, so the schedule is a function of (x, window).
using AtomSchedule = std::function<std::vector<Atom>(const State& x, double lo, double hi)>;

// Additive functional a(x, t) of a flow: absolutely continuous density plus
// countably many atoms. There is no singular-continuous part.
struct PathFunctional {
  std::function<double(const State&)> density;  // empty: zero
  AtomSchedule atoms;                            // empty: no atoms
  // Optional closed form of the continuous part t -> int_0^t density(phi_x(s)) ds.
  std::function<double(const State&, double)> continuous_cumulative;

  static PathFunctional zero() { return {}; }
  static PathFunctional constant_rate(double c);
};

std::vector<Atom> af_atoms(const PathFunctional& a, const State& x, double lo, double hi);

// int_lo^hi density(phi_x(s)) ds.
double af_continuous(const PathFunctional& a, const Flow& flow, const State& x, double lo,
                     double hi, const QuadratureOptions& opts = {});

// a(x, t): continuous part plus atoms on (0, t].
double af_eval(const PathFunctional& a, const Flow& flow, const State& x, double t,
               const QuadratureOptions& opts = {});

// alpha a + beta b; atoms at coinciding offsets are summed.
PathFunctional af_linear(const PathFunctional& a, const PathFunctional& b, double alpha,
                         double beta);

// int_0^t g(phi_x(s)) ds, segments split at `breakpoints`.
double integrate_along_flow(const std::function<double(const State&)>& g, const Flow& flow,
                            const State& x, double t, const QuadratureOptions& opts = {},
                            std::span<const double> breakpoints = {});

// Same over [lo, hi].
double integrate_along_flow(const std::function<double(const State&)>& g, const Flow& flow,
                            const State& x, double lo, double hi,
                            const QuadratureOptions& opts, std::span<const double> breakpoints);

// Offsets closer than this (relative to max(1, |offset|)) are the same instant.
inline constexpr double kOffsetMatchTol = 1e-12;

bool same_offset(double a, double b) noexcept;

// One instant with the value contributed by each merged schedule (0 if absent).
struct MergedAtom {
  double offset;
  boost::container::small_vector<double, 4> values;
};

std::vector<MergedAtom> merge_atoms(std::initializer_list<std::span<const Atom>> schedules);

}  // namespace pdmp
