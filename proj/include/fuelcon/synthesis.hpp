#pragma once

#include <vector>

#include "fuelcon/attainable.hpp"
#include "fuelcon/types.hpp"

namespace fuelcon {

struct SynthesizedControl {
  int agent_id = 0;
  SwitchPlan plan;
  double beta_eff = 0.0;   // budget actually needed; == beta for boundary agents
  bool on_boundary = false;
};

// Control law driving x0 to xbar at exactly tbar within budget beta.
// Boundary targets reuse the full-budget switching formulas; interior targets
// get a reduced effective budget (the smallest feasible one) and fresh switch
// times. Throws SynthesisFailed when no bang-off-bang plan reaches the target
// (e.g. targets in the interior of a flat cap, which need two same-sign
// burns), or when the precondition (target reachable) was violated upstream.
SynthesizedControl synthesize(const AgentState& x0, const AgentState& xbar,
                              double tbar, double beta);

struct RendezvousAgentReport {
  int agent_id = 0;
  double pos_error = 0.0;
  double vel_error = 0.0;
  double fuel_used = 0.0;
  double beta_eff = 0.0;
  bool ok = false;
};

struct RendezvousReport {
  bool pass = false;
  double max_pos_error = 0.0;
  double max_vel_error = 0.0;
  std::vector<RendezvousAgentReport> agents;
};

}  // namespace fuelcon
