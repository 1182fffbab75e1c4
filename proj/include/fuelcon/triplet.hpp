#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fuelcon/types.hpp"

namespace fuelcon {

// Admissible input sign patterns:
//   s1 = {+1, 0, -1}, s2 = {0, +1}, s3 = {-1, 0, +1}, s4 = {0, -1}.
enum class Sequence { s1, s2, s3, s4 };

const char* sequence_name(Sequence s);

// One assignment of boundary sequences to the three agents of a triplet.
// The first common point of three attainable sets lies on all three
// boundaries, and these are the 20 admissible assignments (all-s1 and all-s3
// are excluded: same-sequence boundaries meeting pairwise already implies an
// overlapping interior).
struct Scenario {
  int id = 0;
  std::array<Sequence, 3> seqs{};
};

const std::array<Scenario, 20>& scenario_table();

struct PairTouch {
  double t = 0.0;
  AgentState point;
};

// Least t >= 0 at which the two attainable sets intersect, plus one common
// point (on both boundaries at that instant, up to the bisection slack).
// Throws PairInfeasible when the velocity gap exceeds 2*beta, or when the
// sets provably cannot meet within the bracketing horizon (possible only at
// the exact feasibility-equality edge).
PairTouch pair_min_time(const AgentState& a, const AgentState& b, double beta);

struct ScenarioCandidate {
  double tf = 0.0;
  AgentState xbar;
};

// All positive-time real solutions of the scenario's simultaneous boundary
// equations, sorted ascending by tf. Uses a generic elimination: the s2/s4
// member (if any) pins the consensus velocity at its band edge; otherwise the
// same-sequence pair yields a linear relation between consensus velocity and
// tf, which substituted into the mixed agent's equation gives a quadratic.
// Throws DegenerateScenario when the eliminating denominator vanishes.
std::vector<ScenarioCandidate> scenario_solve(const Scenario& sc,
                                              const AgentState& xi,
                                              const AgentState& xj,
                                              const AgentState& xk,
                                              double beta);

struct SwitchTimes {
  double t1 = 0.0;
  double t2 = 0.0;
};

// Switch instants for one agent reaching (xbar at tf) along `seq` with full
// budget. No feasibility filtering; s2/s4 throw NegativeRadicand when the
// required coast distance is not reachable at all.
SwitchTimes recover_switchings(const AgentState& x0, const AgentState& xbar,
                               double tf, Sequence seq, double beta);

struct TripletSolution {
  double t_star = 0.0;
  AgentState x_star;
  std::optional<Scenario> scenario;  // absent when a pairwise point decides
  std::array<SwitchPlan, 3> plans{};
  // False only when some agent's plan could not be made to end exactly on the
  // common point (possible for bisection-sourced points lying outside the
  // transfer solvers' slack); the plan then ends at the nearest reachable
  // candidate instead.
  bool plans_exact = true;
};

// Minimum time to consensus and consensus state for one triplet: pairwise
// intersection times first; if the latest pair's touch point lies in the
// third set, that decides (case 1); otherwise the 20 boundary scenarios are
// solved and the least feasible candidate wins, cross-checked against a
// bisection on the three-set overlap predicate (case 2).
TripletSolution solve_triplet(const AgentState& xi, const AgentState& xj,
                              const AgentState& xk, double beta);

}  // namespace fuelcon
