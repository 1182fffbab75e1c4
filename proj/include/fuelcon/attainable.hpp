#pragma once

#include <optional>
#include <vector>

#include "fuelcon/types.hpp"

namespace fuelcon {

// Handle for one attainable set: states reachable from x0 at exactly time tf
// with |u| <= 1 and fuel (the L1 norm of u) at most beta.
struct ReachSpec {
  AgentState x0;
  double beta = 0.0;
  double tf = 0.0;
};

struct VelocityBand {
  double v_lo = 0.0;
  double v_hi = 0.0;
  bool empty = false;
  bool contains(double v, double slack = 0.0) const {
    return !empty && v >= v_lo - slack && v <= v_hi + slack;
  }
};

// Position interval attainable at a fixed velocity; an interval because the
// attainable set is convex.
struct SliceExtent {
  double v = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
};

struct Containment {
  bool inside = false;
  // Plan whose endpoint is the target. Mirrored-burn (classic) plans are
  // preferred; targets in the split-burn region (strictly between the
  // pure-late and pure-early burn endpoints at the target velocity, including
  // the flat cap interiors) get the unique same-sign two-burn plan instead.
  std::optional<SwitchPlan> witness;
};

// Reachable velocities: [x0.vel - m, x0.vel + m] with m = min(beta, tf).
VelocityBand velocity_band(const ReachSpec& r);

// Extreme positions at velocity v. With binding fuel (beta < tf) the bounds
// come from the full-fuel accelerate/coast/brake envelopes; with beta >= tf
// fuel is not binding and the bang-bang (no coast) envelopes apply. The two
// forms agree at beta == tf.
SliceExtent slice_extent(const ReachSpec& r, double v);

// Membership by slice geometry (velocity band + position interval), plus an
// exact witness plan when one exists.
Containment contains(const ReachSpec& r, const AgentState& target);

// Closed polyline tracing the set boundary: the upper-position arc, the flat
// segment at the top of the velocity band, the lower-position arc, the flat
// segment at the bottom. n velocity stations per arc, Chebyshev-spaced
// (curvature concentrates near the band edges). First vertex repeated last.
std::vector<AgentState> boundary_polyline(const ReachSpec& r, int n);

// Velocity strip that must contain any common reachable point of all agents:
// [max vel - beta, min vel + beta].
VelocityBand consensus_band(const std::vector<AgentState>& agents, double beta);

// Consensus is possible iff max vel - min vel <= 2 beta.
bool feasible(const std::vector<AgentState>& agents, double beta);

// Every mirrored-burn plan that reaches `target` exactly at time tf with fuel
// at most fuel_cap, sorted ascending by fuel use (at most one per polarity).
std::vector<SwitchPlan> exact_transfer_plans(const AgentState& x0,
                                             const AgentState& target,
                                             double tf, double fuel_cap);

// Same-sign two-burn transfer to `target` at time tf. Exists exactly when the
// target sits between the pure-late and pure-early burn endpoints at its
// velocity; fuel use is |target.vel - x0.vel|, the minimum possible.
std::optional<SwitchPlan> split_transfer_plan(const AgentState& x0,
                                              const AgentState& target,
                                              double tf, double fuel_cap);

}  // namespace fuelcon
