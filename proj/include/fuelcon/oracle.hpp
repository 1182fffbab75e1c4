#pragma once

#include <vector>

#include "fuelcon/types.hpp"

namespace fuelcon {

// Brute-force baselines used only by tests. They never call the analytic
// geometry: reachability is probed by integrating explicit control profiles.

// Endpoints of every two-burn plan (+g, coast, -g) with switch times on a
// uniform grid of step `grid_step` over 0 <= t1 <= t2 <= tf and fuel within
// budget. Duplicates are kept; order is deterministic.
std::vector<AgentState> oracle_reachable(const AgentState& x0, double beta,
                                         double tf, double grid_step);

// Exact extreme positions reachable at velocity v and time tf using at most
// two burns (any sign combination, budget beta). Each burn family is
// monotone in its free parameter, so evaluating the parameter interval's
// endpoints gives the true extremes without sampling error.
struct OracleSlice {
  double v = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  bool reachable = false;
};
OracleSlice oracle_slice(const AgentState& x0, double beta, double tf, double v);

struct OracleConsensus {
  double t = 0.0;
  AgentState point;  // center of a grid cell every agent can occupy
};

// Smallest time (to resolution t_step) at which all agents' reachable sets
// share a grid cell of side grid_step. Rasterizes each set row by row at
// grid velocities via oracle_slice. Throws NoConsensusWithinHorizon if no
// shared cell appears by t_max.
OracleConsensus oracle_min_consensus(const std::vector<AgentState>& agents,
                                     double beta, double t_step,
                                     double grid_step, double t_max);

}  // namespace fuelcon
