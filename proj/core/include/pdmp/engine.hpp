#pragma once

#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/path_functional.hpp"
#include "pdmp/rng.hpp"

namespace pdmp {

struct JumpEvent {
  double time;
  State pre;
  State post;
  // Holding time as sampled; differences of `time` can lose the last bits.
  double holding = 0.0;
};

enum class SkeletonStatus { completed, exploded };

// One simulated path on [0, horizon]: jump times with pre- and post-jump states.
struct Skeleton {
  State x0;
  std::vector<JumpEvent> events;
  double horizon = 0.0;
  SkeletonStatus status = SkeletonStatus::completed;

  bool exploded() const noexcept { return status == SkeletonStatus::exploded; }
  // Number of jumps in (0, t].
  std::size_t jumps_by(double t) const;
};

// Simulates by inverse transform of the holding time from the `holding`
// substream and the destination from the `destination` substream of the
// same event index, so two models driven by one stream share variates.
Skeleton simulate_skeleton(const PdmpModel& model, const State& x0, double horizon,
                           const VariateStream& stream);

// X_t: flow from the post-jump state of the last jump at or before t.
State path_state(const Skeleton& sk, const PdmpModel& model, double t);

// X_t^-: equals X_t except at jump times, where it is the pre-jump state.
State path_state_pre(const Skeleton& sk, const PdmpModel& model, double t);

// Segment n covers (tau_n, min(tau_{n+1}, t)] starting from `start`.
struct PathSegment {
  const State* start;
  double begin;
  double length;
  bool ends_with_jump;
};

std::vector<PathSegment> path_segments(const Skeleton& sk, double t);

// L(a)_t: a restarted at every jump.
double eval_L(const PathFunctional& a, const Skeleton& sk, const PdmpModel& model, double t);

// Largest |pre_n - phi(post_{n-1}, tau_n - tau_{n-1})| over the skeleton.
double skeleton_consistency_error(const Skeleton& sk, const PdmpModel& model);

}  // namespace pdmp
