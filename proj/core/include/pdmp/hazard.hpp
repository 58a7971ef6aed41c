#pragma once

#include <vector>

#include "pdmp/flow.hpp"
#include "pdmp/path_functional.hpp"
#include "pdmp/quadrature.hpp"

namespace pdmp {

// Conditional hazard Lambda(x, dt) = lambda(phi_x(t)) dt + sum of atoms.
// Atom values are the hazard jumps delta in (0, 1]; delta = 1 forces a jump.
struct HazardLaw {
  PathFunctional measure;

  static HazardLaw constant(double rate) { return {PathFunctional::constant_rate(rate)}; }
};

struct CumulativeHazard {
  double continuous = 0.0;
  std::vector<Atom> atoms;
};

CumulativeHazard cumulative_hazard(const HazardLaw& law, const Flow& flow, const State& x,
                                   double t, const QuadratureOptions& opts = {});

// F(x, t) = exp(-int_0^t lambda) * prod_{atoms in (0,t]} (1 - delta).
double survival(const HazardLaw& law, const Flow& flow, const State& x, double t,
                const QuadratureOptions& opts = {});

// Whether a delta = 1 atom sits at the horizon c(x) < inf.
bool terminal_forced(const HazardLaw& law, const Flow& flow, const State& x);

inline constexpr double kJumpTimeTol = 1e-12;

// inf{t : F(x, t) <= u}. Returns +inf when the trajectory survives up to
// `limit` (or forever), and throws HorizonExceeded when it would survive past
// a finite horizon that carries no forced atom.
double sample_jump_time(const HazardLaw& law, const Flow& flow, const State& x, double u,
                        const QuadratureOptions& opts = {}, double limit = kInfinity);

}  // namespace pdmp
