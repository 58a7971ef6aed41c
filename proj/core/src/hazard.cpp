#include "pdmp/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "pdmp/errors.hpp"

namespace pdmp {
namespace {

void check_atom(const Atom& a) {
  if (!(a.value > 0.0 && a.value <= 1.0)) {
    std::ostringstream msg;
    msg << "hazard atom value " << a.value << " at offset " << a.offset << " outside (0, 1]";
    throw Error(ErrorCode::BadParameters, msg.str());
  }
}

double clamp_to_horizon(const Flow& flow, const State& x, double t) {
  const double c = flow.horizon(x);
  if (t <= c) return t;
  if (std::isfinite(c) && t <= c + kHorizonSlack * (1.0 + c)) return c;
  std::ostringstream msg;
  msg << "t = " << t << " beyond horizon " << c;
  throw Error(ErrorCode::HorizonExceeded, msg.str());
}

// Solve acc + int_a^s lambda = target for s in (a, b], knowing it is reached by b.
double invert_continuous(const HazardLaw& law, const Flow& flow, const State& x, double a,
                         double b, double need, const QuadratureOptions& opts) {
  auto excess = [&](double s) { return af_continuous(law.measure, flow, x, a, s, opts) - need; };
  if (need <= 0.0) return a;
  double fb = excess(b);
  if (fb <= 0.0) return b;
  const double fa = -need;
  auto tol = [](double l, double r) {
    return r - l <= std::max(kJumpTimeTol, 4.0 * std::numeric_limits<double>::epsilon() * r);
  };
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(excess, a, b, fa, fb, tol, iters);
  if (iters >= 200 && !tol(lo, hi))
    throw Error(ErrorCode::InversionFailure, "root bracketing stalled");
  // Smallest time reaching the target, up to the tolerance.
  return hi;
}

}  // namespace

CumulativeHazard cumulative_hazard(const HazardLaw& law, const Flow& flow, const State& x,
                                   double t, const QuadratureOptions& opts) {
  if (x.is_cemetery()) throw Error(ErrorCode::CemeteryInput, "cumulative hazard at cemetery");
  t = clamp_to_horizon(flow, x, t);
  CumulativeHazard out;
  if (t == 0.0) return out;
  out.continuous = af_continuous(law.measure, flow, x, 0.0, t, opts);
  out.atoms = af_atoms(law.measure, x, 0.0, t);
  for (const Atom& a : out.atoms) check_atom(a);
  return out;
}

double survival(const HazardLaw& law, const Flow& flow, const State& x, double t,
                const QuadratureOptions& opts) {
  const CumulativeHazard ch = cumulative_hazard(law, flow, x, t, opts);
  double f = std::exp(-ch.continuous);
  for (const Atom& a : ch.atoms) f *= 1.0 - a.value;
  return f;
}

bool terminal_forced(const HazardLaw& law, const Flow& flow, const State& x) {
  const double c = flow.horizon(x);
  if (!std::isfinite(c)) return false;
  const double eps = 2.0 * kOffsetMatchTol * std::max(1.0, c);
  for (const Atom& a : af_atoms(law.measure, x, std::max(0.0, c - eps), c))
    if (same_offset(a.offset, c) && a.value >= 1.0) return true;
  return false;
}

double sample_jump_time(const HazardLaw& law, const Flow& flow, const State& x, double u,
                        const QuadratureOptions& opts, double limit) {
  if (x.is_cemetery()) throw Error(ErrorCode::CemeteryInput, "jump time from cemetery");
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::BadParameters, "uniform variate outside (0, 1)");
  const double target = -std::log(u);
  const double c = flow.horizon(x);
  const double end = std::min(c, limit);
  const bool bounded = std::isfinite(end);

  double acc = 0.0;
  double pos = 0.0;
  double step = 1.0;
  constexpr double kScanLimit = 1e15;

  while (true) {
    const double window_end = bounded ? end : pos + step;
    double a = pos;
    for (const Atom& atom : af_atoms(law.measure, x, pos, window_end)) {
      check_atom(atom);
      const double seg = af_continuous(law.measure, flow, x, a, atom.offset, opts);
      if (acc + seg >= target)
        return invert_continuous(law, flow, x, a, atom.offset, target - acc, opts);
      acc += seg;
      a = atom.offset;
      if (atom.value >= 1.0) return atom.offset;
      acc += -std::log1p(-atom.value);
      if (acc >= target) return atom.offset;
    }
    const double seg = af_continuous(law.measure, flow, x, a, window_end, opts);
    if (acc + seg >= target)
      return invert_continuous(law, flow, x, a, window_end, target - acc, opts);
    acc += seg;
    pos = window_end;
    if (bounded) break;
    if (pos >= kScanLimit) return kInfinity;
    step *= 2.0;
  }

  // Survived the whole window.
  if (limit <= c) return kInfinity;
  std::ostringstream msg;
  msg << "survival past finite horizon " << c << " with no forced atom from " << x;
  throw Error(ErrorCode::HorizonExceeded, msg.str());
}

}  // namespace pdmp
