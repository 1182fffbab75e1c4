#include "fuelcon/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "fuelcon/attainable.hpp"
#include "fuelcon/synthesis.hpp"
#include "fuelcon/triplet.hpp"

namespace fuelcon {
namespace {

struct Outcome {
  TripletSolution sol;
  std::array<int, 3> ids{0, 0, 0};  // ascending original 1-based ids
};

// Total order on outcomes: larger time wins; exact ties go to the
// lexicographically smallest id triple, so any reduction order agrees.
bool outranks(const Outcome& a, const Outcome& b) {
  if (a.sol.t_star != b.sol.t_star) return a.sol.t_star > b.sol.t_star;
  return a.ids < b.ids;
}

std::vector<std::array<int, 3>> triplets_of(const std::vector<int>& ids) {
  std::vector<std::array<int, 3>> out;
  const int n = static_cast<int>(ids.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) out.push_back({ids[a], ids[b], ids[c]});
  return out;
}

ConsensusResult solve_impl(const Fleet& fleet, const SolveOptions& opts,
                           int workers) {
  if (fleet.agents.empty()) {
    throw std::invalid_argument("fleet must contain at least one agent");
  }
  if (!(fleet.beta >= 0.0) || !std::isfinite(fleet.beta)) {
    throw std::invalid_argument("fuel budget must be non-negative and finite");
  }
  const int n = static_cast<int>(fleet.agents.size());

  ConsensusResult res;
  res.feasible = feasible(fleet.agents, fleet.beta);
  if (!res.feasible) return res;

  std::vector<int> cand = opts.hull_prune ? hull_filter(fleet.agents)
                                          : std::vector<int>{};
  if (!opts.hull_prune) {
    cand.resize(n);
    for (int i = 0; i < n; ++i) cand[i] = i + 1;
  }

  // Exact duplicates collapse onto the smallest-id representative.
  std::vector<int> uniq;
  for (int id : cand) {
    const AgentState& s = fleet.agents[id - 1];
    const bool dup = std::any_of(uniq.begin(), uniq.end(), [&](int u) {
      const AgentState& t = fleet.agents[u - 1];
      return t.pos == s.pos && t.vel == s.vel;
    });
    if (!dup) uniq.push_back(id);
  }

  if (uniq.size() == 1) {
    res.t_star = 0.0;
    res.x_star = fleet.agents[uniq[0] - 1];
    res.critical_triplet = {uniq[0], 0, 0};
  } else if (uniq.size() == 2) {
    const PairTouch touch = pair_min_time(fleet.agents[uniq[0] - 1],
                                          fleet.agents[uniq[1] - 1], fleet.beta);
    res.t_star = touch.t;
    res.x_star = touch.point;
    res.critical_triplet = {uniq[0], uniq[1], 0};
  } else {
    const auto all = triplets_of(uniq);
    const int w = std::clamp<int>(workers, 1, static_cast<int>(all.size()));

    auto run = [&](int part) {
      std::pair<std::optional<Outcome>, long> acc{std::nullopt, 0};
      for (size_t r = part; r < all.size(); r += w) {
        const auto& t = all[r];
        Outcome o{solve_triplet(fleet.agents[t[0] - 1], fleet.agents[t[1] - 1],
                                fleet.agents[t[2] - 1], fleet.beta),
                  t};
        ++acc.second;
        if (!acc.first || outranks(o, *acc.first)) acc.first = std::move(o);
      }
      return acc;
    };

    std::optional<Outcome> best;
    long solved = 0;
    if (w == 1) {
      auto acc = run(0);
      best = std::move(acc.first);
      solved = acc.second;
    } else {
      std::vector<std::future<std::pair<std::optional<Outcome>, long>>> jobs;
      jobs.reserve(w);
      for (int part = 0; part < w; ++part) {
        jobs.push_back(std::async(std::launch::async, run, part));
      }
      for (auto& job : jobs) {
        auto acc = job.get();
        solved += acc.second;
        if (acc.first && (!best || outranks(*acc.first, *best))) {
          best = std::move(acc.first);
        }
      }
    }

    res.t_star = best->sol.t_star;
    res.x_star = best->sol.x_star;
    res.critical_triplet = best->ids;
    res.triplets_solved = solved;
  }

  // The critical triplet's point must lie in every agent's set (the pairwise
  // 2D Helly property lifts the triplet max to the fleet optimum).
  for (int i = 0; i < n; ++i) {
    if (!contains({fleet.agents[i], fleet.beta, res.t_star}, res.x_star).inside) {
      throw NoCommonPoint("agent " + std::to_string(i + 1) +
                          " cannot reach the consensus point at t=" +
                          std::to_string(res.t_star));
    }
  }

  res.per_agent.reserve(n);
  for (int i = 0; i < n; ++i) {
    SynthesizedControl c =
        synthesize(fleet.agents[i], res.x_star, res.t_star, fleet.beta);
    c.agent_id = i + 1;
    res.per_agent.push_back(std::move(c));
  }
  return res;
}

}  // namespace

std::vector<int> hull_filter(const std::vector<AgentState>& agents) {
  const int n = static_cast<int>(agents.size());
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  if (n <= 2) return all;

  struct Pt {
    double x, y;
    bool operator<(const Pt& o) const { return x < o.x || (x == o.x && y < o.y); }
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
  };
  std::vector<Pt> pts;
  pts.reserve(n);
  for (const AgentState& a : agents) pts.push_back({a.pos, a.vel});
  std::vector<Pt> u = pts;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.size() <= 2) return all;

  auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  // Monotone chain popping only on strict right turns, so collinear boundary
  // points stay in.
  auto chain = [&](auto begin, auto end) {
    std::vector<Pt> h;
    for (auto it = begin; it != end; ++it) {
      while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), *it) < 0.0) {
        h.pop_back();
      }
      h.push_back(*it);
    }
    return h;
  };
  const std::vector<Pt> lower = chain(u.begin(), u.end());
  const std::vector<Pt> upper = chain(u.rbegin(), u.rend());

  std::set<std::pair<double, double>> keep;
  for (const Pt& p : lower) keep.insert({p.x, p.y});
  for (const Pt& p : upper) keep.insert({p.x, p.y});

  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (keep.count({pts[i].x, pts[i].y})) out.push_back(i + 1);
  }
  return out;
}

std::vector<std::array<int, 3>> partition_triplets(int n, int agent_id,
                                                   int workers) {
  if (agent_id < 1 || agent_id > workers || workers > n) {
    throw std::invalid_argument(
        "partition_triplets: need 1 <= agent_id <= workers <= n");
  }
  std::vector<std::array<int, 3>> out;
  long rank = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c, ++rank)
        if (rank % workers == agent_id - 1) out.push_back({a, b, c});
  return out;
}

ConsensusResult solve_fleet(const Fleet& fleet, const SolveOptions& opts) {
  return solve_impl(fleet, opts, 1);
}

ConsensusResult solve_fleet_distributed(const Fleet& fleet, int workers,
                                        const SolveOptions& opts) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  return solve_impl(fleet, opts, workers);
}

}  // namespace fuelcon
