#pragma once

#include <array>
#include <vector>

#include "fuelcon/synthesis.hpp"
#include "fuelcon/triplet.hpp"
#include "fuelcon/types.hpp"

namespace fuelcon {

// N agents (ids 1..N by list position) sharing one fuel budget.
struct Fleet {
  std::vector<AgentState> agents;
  double beta = 0.0;
};

struct ConsensusResult {
  bool feasible = false;
  double t_star = 0.0;
  AgentState x_star;
  // 1-based ids of the binding triplet; trailing zeros when fewer than three
  // distinct states decide (pair or single).
  std::array<int, 3> critical_triplet{0, 0, 0};
  std::vector<SynthesizedControl> per_agent;  // one per fleet agent, in order
  long triplets_solved = 0;
};

struct SolveOptions {
  bool hull_prune = false;
};

// Minimum-time consensus for the whole fleet: the maximum over all (distinct)
// triplet solutions, with plans synthesized for every agent. Infeasible
// fleets (velocity spread > 2*beta) return feasible = false. Throws
// NoCommonPoint if the winning point fails membership for some agent (the
// triplet maximum must be a common point by convexity; failure means an
// internal inconsistency), and SynthesisFailed when a plan cannot be built.
ConsensusResult solve_fleet(const Fleet& f, const SolveOptions& opts = {});

// 1-based ids of agents whose initial states lie on the boundary of the
// planar convex hull of all initial states (collinear boundary points
// included). Pruning to this subset preserves the consensus time: every
// attainable set is the same convex set translated by the linear flow of the
// initial state, so interior agents' sets contain the boundary agents'
// common points.
std::vector<int> hull_filter(const std::vector<AgentState>& agents);

// Deterministic round-robin split of the lexicographically ordered triplets
// of {1..n} among `workers` workers; returns worker `agent_id`'s share.
// Requires 1 <= agent_id <= workers <= n. Partitions are disjoint, cover all
// C(n,3) triplets (none when n < 3), and each has size at most
// ceil(C(n,3)/workers).
std::vector<std::array<int, 3>> partition_triplets(int n, int agent_id,
                                                   int workers);

// Same result as solve_fleet (bit-for-bit, by the deterministic tie-break on
// the smaller lexicographic triplet), computed on `workers` concurrent
// partitions.
ConsensusResult solve_fleet_distributed(const Fleet& f, int workers,
                                        const SolveOptions& opts = {});

// Simulates every plan and reports terminal errors, fuel use, and margins.
RendezvousReport verify_rendezvous(const Fleet& fleet,
                                   const ConsensusResult& result);

}  // namespace fuelcon
