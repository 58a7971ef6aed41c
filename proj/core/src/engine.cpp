#include "pdmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

State kernel_sample(const JumpKernel& q, const State& y, UniformSource& u) {
  if (y.is_cemetery()) throw Error(ErrorCode::UnsupportedState, "jump from the cemetery");
  return q.sample(y, u);
}

double kernel_integrate(const JumpKernel& q, const State& y, const TestFunction& f) {
  if (y.is_cemetery()) throw Error(ErrorCode::UnsupportedState, "kernel integral at the cemetery");
  return q.integrate(y, f);
}

std::size_t Skeleton::jumps_by(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(events.begin(), events.end(), t,
                       [](double v, const JumpEvent& e) { return v < e.time; }) -
      events.begin());
}

Skeleton simulate_skeleton(const PdmpModel& model, const State& x0, double horizon,
                           const VariateStream& stream) {
  if (!std::isfinite(horizon) || horizon < 0.0)
    throw Error(ErrorCode::BadParameters, "simulation horizon must be finite and non-negative");
  if (x0.is_cemetery()) throw Error(ErrorCode::CemeteryInput, "simulation from the cemetery");

  Skeleton sk{x0, {}, horizon, SkeletonStatus::completed};
  State current = x0;
  double tau = 0.0;
  for (std::uint32_t n = 0;; ++n) {
    if (sk.events.size() >= model.max_jumps) {
      sk.status = SkeletonStatus::exploded;
      break;
    }
    const double remaining = horizon - tau;
    const double u = stream.at(Substream::holding, n, 0);
    const double wait =
        sample_jump_time(model.hazard, model.flow, current, u, model.quadrature, remaining);
    if (!(wait <= remaining)) break;
    State pre = flow_eval(model.flow, current, wait);
    StreamCursor cursor(stream, Substream::destination, n);
    State post = kernel_sample(*model.kernel, pre, cursor);
    tau += wait;
    sk.events.push_back({tau, std::move(pre), post, wait});
    if (post.is_cemetery()) break;
    current = std::move(post);
  }
  return sk;
}

namespace {

void check_time(const Skeleton& sk, double t) {
  if (!(t >= 0.0 && t <= sk.horizon)) {
    std::ostringstream msg;
    msg << "path time " << t << " outside [0, " << sk.horizon << "]";
    throw Error(ErrorCode::BadParameters, msg.str());
  }
}

}  // namespace

State path_state(const Skeleton& sk, const PdmpModel& model, double t) {
  check_time(sk, t);
  const std::size_t k = sk.jumps_by(t);
  if (k == 0) return flow_eval(model.flow, sk.x0, t);
  const JumpEvent& e = sk.events[k - 1];
  if (e.post.is_cemetery()) return e.post;
  return flow_eval(model.flow, e.post, t - e.time);
}

State path_state_pre(const Skeleton& sk, const PdmpModel& model, double t) {
  check_time(sk, t);
  if (t == 0.0) return sk.x0;
  const std::size_t k = sk.jumps_by(t);
  if (k > 0 && sk.events[k - 1].time == t) return sk.events[k - 1].pre;
  return path_state(sk, model, t);
}

std::vector<PathSegment> path_segments(const Skeleton& sk, double t) {
  std::vector<PathSegment> segs;
  const State* start = &sk.x0;
  double begin = 0.0;
  for (std::size_t n = 0;; ++n) {
    if (n > 0 && begin >= t) break;
    const double next = n < sk.events.size() ? sk.events[n].time : kInfinity;
    const double end = std::min(next, t);
    const double length = next <= t ? sk.events[n].holding : end - begin;
    segs.push_back({start, begin, length, next <= t});
    if (next > t) break;
    start = &sk.events[n].post;
    begin = next;
    if (start->is_cemetery()) break;
  }
  return segs;
}

double eval_L(const PathFunctional& a, const Skeleton& sk, const PdmpModel& model, double t) {
  check_time(sk, t);
  double total = 0.0;
  for (const PathSegment& seg : path_segments(sk, t))
    if (seg.length > 0.0) total += af_eval(a, model.flow, *seg.start, seg.length, model.quadrature);
  return total;
}

double skeleton_consistency_error(const Skeleton& sk, const PdmpModel& model) {
  double worst = 0.0;
  const State* prev = &sk.x0;
  double prev_t = 0.0;
  for (const JumpEvent& e : sk.events) {
    const State expect = flow_eval(model.flow, *prev, e.holding);
    worst = std::max(worst, std::abs(e.time - prev_t - e.holding));
    State pre = e.pre;
    pre.tag = expect.tag;  // boundary tagging is not part of the comparison
    worst = std::max(worst, state_distance(expect, pre));
    prev = &e.post;
    prev_t = e.time;
  }
  return worst;
}

}  // namespace pdmp
