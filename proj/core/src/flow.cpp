#include "pdmp/flow.hpp"

#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

State Flow::boundary_limit(const State& x) const {
  if (!limit_) throw Error(ErrorCode::HorizonExceeded, "flow has no boundary limit");
  State s = limit_(x);
  if (!s.is_cemetery()) s.tag = StateTag::boundary;
  return s;
}

Flow Flow::constant() {
  return Flow([](const State& x, double) { return x; });
}

Flow Flow::translation(Coords velocity) {
  return Flow([v = std::move(velocity)](const State& x, double t) {
    State y = x;
    for (std::size_t i = 0; i < y.coords.size() && i < v.size(); ++i) y.coords[i] += v[i] * t;
    return y;
  });
}

State flow_eval(const Flow& flow, const State& x, double t) {
  if (x.is_cemetery()) throw Error(ErrorCode::CemeteryInput, "flow evaluated at the cemetery");
  if (t == 0.0) return x;
  if (!(t > 0.0)) throw Error(ErrorCode::HorizonExceeded, "negative flow time");
  const double c = flow.horizon(x);
  if (t < c) return flow.raw(x, t);
  if (std::isfinite(c) && t <= c + kHorizonSlack * (1.0 + c)) return flow.boundary_limit(x);
  std::ostringstream msg;
  msg << "t = " << t << " beyond horizon " << c << " from " << x;
  throw Error(ErrorCode::HorizonExceeded, msg.str());
}

}  // namespace pdmp
