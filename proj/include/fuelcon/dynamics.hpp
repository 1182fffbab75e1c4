#pragma once

#include "fuelcon/types.hpp"

namespace fuelcon {

// Exact double-integrator step under constant input u for duration dt.
AgentState propagate(const AgentState& s, double u, double dt);

// State reached at plan.tf by running the three phases of a bang-off-bang plan.
AgentState apply_plan(const AgentState& x0, const SwitchPlan& p);

// Evaluate the plan at an intermediate time t in [0, plan.tf].
AgentState apply_plan_until(const AgentState& x0, const SwitchPlan& p, double t);

// Input level at time t (right-continuous at the switch instants).
double control_at(const SwitchPlan& p, double t);

double fuel_of(const SwitchPlan& p);

bool plan_valid(const SwitchPlan& p, double eps = kTimeEps);

// n uniform sample times on [0, tf] plus the exact switch instants; the final
// sample equals apply_plan(x0, p) exactly.
Trajectory sample_trajectory(const AgentState& x0, const SwitchPlan& p, int n);

}  // namespace fuelcon
