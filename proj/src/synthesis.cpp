#include "fuelcon/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuelcon/dynamics.hpp"
#include "fuelcon/fleet.hpp"

namespace fuelcon {

SynthesizedControl synthesize(const AgentState& x0, const AgentState& xbar,
                              double tbar, double beta) {
  const ReachSpec r{x0, beta, tbar};

  auto plans = exact_transfer_plans(x0, xbar, tbar, beta);

  SynthesizedControl out;
  if (!plans.empty()) {
    out.plan = plans.front();  // smallest effective budget among feasible plans
  } else if (auto split = split_transfer_plan(x0, xbar, tbar, beta)) {
    // Target in the split-burn region: no mirrored-burn plan exists; the
    // unique same-sign two-burn transfer uses the minimum fuel |dv|.
    out.plan = *split;
  } else {
    throw SynthesisFailed(
        "no plan reaches (" + std::to_string(xbar.pos) + ", " +
        std::to_string(xbar.vel) + ") from (" + std::to_string(x0.pos) + ", " +
        std::to_string(x0.vel) + ") at t=" + std::to_string(tbar) +
        " within budget " + std::to_string(beta));
  }
  const double fuel = fuel_of(out.plan);

  const double m = std::min(beta, tbar);
  const VelocityBand band = velocity_band(r);
  const SliceExtent s = slice_extent(r, std::clamp(xbar.vel, band.v_lo, band.v_hi));
  const double vslack = geom_eps(std::abs(xbar.vel) + std::abs(x0.vel) + m);
  const double xslack = geom_eps(std::abs(xbar.pos) + std::abs(s.x_lo) + std::abs(s.x_hi));
  out.on_boundary = (m - std::abs(xbar.vel - x0.vel) <= vslack) ||
                    (s.x_hi - xbar.pos <= xslack) || (xbar.pos - s.x_lo <= xslack);

  out.beta_eff = out.on_boundary ? beta : fuel;
  return out;
}

RendezvousReport verify_rendezvous(const Fleet& fleet, const ConsensusResult& result) {
  RendezvousReport rep;
  rep.pass = true;
  for (size_t i = 0; i < fleet.agents.size(); ++i) {
    const SynthesizedControl& ctrl = result.per_agent[i];
    const AgentState end = apply_plan(fleet.agents[i], ctrl.plan);

    RendezvousAgentReport a;
    a.agent_id = ctrl.agent_id;
    a.pos_error = std::abs(end.pos - result.x_star.pos);
    a.vel_error = std::abs(end.vel - result.x_star.vel);
    a.fuel_used = fuel_of(ctrl.plan);
    a.beta_eff = ctrl.beta_eff;
    a.ok = a.pos_error <= 1e-4 + 1e-6 * std::abs(result.x_star.pos) &&
           a.vel_error <= 1e-4 + 1e-6 * std::abs(result.x_star.vel) &&
           a.fuel_used <= fleet.beta + 1e-6 &&
           std::abs(ctrl.plan.tf - result.t_star) <= kTimeEps * (1.0 + result.t_star) &&
           plan_valid(ctrl.plan, kTimeEps * (1.0 + result.t_star));

    rep.max_pos_error = std::max(rep.max_pos_error, a.pos_error);
    rep.max_vel_error = std::max(rep.max_vel_error, a.vel_error);
    rep.pass = rep.pass && a.ok;
    rep.agents.push_back(a);
  }
  return rep;
}

}  // namespace fuelcon
