#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "fuelcon/attainable.hpp"
#include "fuelcon/dynamics.hpp"
#include "fuelcon/fleet.hpp"
#include "fuelcon/triplet.hpp"

using namespace fuelcon;

namespace {

std::mt19937 rng(41250907u);

Fleet six_agents() {
    Fleet f;
    f.beta = 50.0;
    f.agents = {{0, 0}, {40, 64}, {-500, 8}, {-100, 10}, {600, 30}, {2900, 10}};
    return f;
}

// velocity spread capped at 0.8 * 2*beta so every pair stays clearly feasible
Fleet random_fleet(int n) {
    std::uniform_real_distribution<double> X(-100, 100), V0(-5, 5), U(0, 1),
        B(1.0, 10.0);
    Fleet f;
    f.beta = B(rng);
    const double v0 = V0(rng);
    for (int i = 0; i < n; ++i) {
        f.agents.push_back({X(rng), v0 + (U(rng) - 0.5) * 1.6 * f.beta});
    }
    return f;
}

void check_same_result(const ConsensusResult& a, const ConsensusResult& b) {
    CHECK(a.feasible == b.feasible);
    CHECK(a.t_star == b.t_star);
    CHECK(a.x_star.pos == b.x_star.pos);
    CHECK(a.x_star.vel == b.x_star.vel);
    CHECK(a.critical_triplet == b.critical_triplet);
    REQUIRE(a.per_agent.size() == b.per_agent.size());
    for (size_t i = 0; i < a.per_agent.size(); ++i) {
        const SwitchPlan& p = a.per_agent[i].plan;
        const SwitchPlan& q = b.per_agent[i].plan;
        CHECK(p.gamma == q.gamma);
        CHECK(p.t1 == q.t1);
        CHECK(p.t2 == q.t2);
        CHECK(p.tf == q.tf);
        CHECK(p.gamma_tail == q.gamma_tail);
        CHECK(a.per_agent[i].beta_eff == b.per_agent[i].beta_eff);
        CHECK(a.per_agent[i].on_boundary == b.per_agent[i].on_boundary);
    }
}

} // namespace

TEST_CASE("solve_fleet: six-agent run") {
    Fleet f = six_agents();
    ConsensusResult res = solve_fleet(f);

    REQUIRE(res.feasible);
    CHECK(res.critical_triplet == std::array<int, 3>{1, 2, 6});
    CHECK(std::abs(res.t_star - 100.128763) <= 1e-4);
    CHECK(std::abs(res.x_star.pos - 3196.9656) <= 1e-2);
    CHECK(std::abs(res.x_star.vel - 31.2028) <= 1e-3);

    // the winner reproduces its own triplet's solution bit for bit
    TripletSolution trip =
        solve_triplet(f.agents[0], f.agents[1], f.agents[5], f.beta);
    CHECK(res.t_star == trip.t_star);
    CHECK(res.x_star.pos == trip.x_star.pos);
    CHECK(res.x_star.vel == trip.x_star.vel);

    // max-dominance over every enumerated triplet
    CHECK(res.triplets_solved == 20);
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c) {
                TripletSolution s =
                    solve_triplet(f.agents[a], f.agents[b], f.agents[c], f.beta);
                CHECK(res.t_star >= s.t_star - 1e-9 * (1.0 + res.t_star));
            }

    // the consensus point is common to all six sets and its velocity sits in
    // the shared band [64 - 50, 0 + 50]
    for (const AgentState& a : f.agents) {
        CHECK(contains({a, f.beta, res.t_star}, res.x_star).inside);
    }
    CHECK(res.x_star.vel >= 14.0);
    CHECK(res.x_star.vel <= 50.0);

    REQUIRE(res.per_agent.size() == 6);
    for (size_t i = 0; i < 6; ++i) {
        CHECK(res.per_agent[i].agent_id == static_cast<int>(i) + 1);
        CHECK(res.per_agent[i].plan.tf == res.t_star);
        CHECK(fuel_of(res.per_agent[i].plan) <= f.beta + 1e-6);
    }
    // the critical agents burn their whole budget; the others keep a margin
    for (int id : {1, 2, 6}) {
        CHECK(std::abs(fuel_of(res.per_agent[id - 1].plan) - 50.0) <= 1e-3);
        CHECK(res.per_agent[id - 1].on_boundary);
    }
    for (int id : {3, 4, 5}) {
        CHECK(fuel_of(res.per_agent[id - 1].plan) < 50.0);
        CHECK_FALSE(res.per_agent[id - 1].on_boundary);
    }

    RendezvousReport rep = verify_rendezvous(f, res);
    CHECK(rep.pass);
    CHECK(rep.max_pos_error <= 1e-4 + 1e-6 * std::abs(res.x_star.pos));
}

TEST_CASE("solve_fleet: single agent and infeasible spread") {
    Fleet one{{{7, -3}}, 5.0};
    ConsensusResult res = solve_fleet(one);
    REQUIRE(res.feasible);
    CHECK(res.t_star == 0.0);
    CHECK(res.x_star.pos == 7.0);
    CHECK(res.x_star.vel == -3.0);
    CHECK(res.critical_triplet == std::array<int, 3>{1, 0, 0});
    REQUIRE(res.per_agent.size() == 1);
    CHECK(fuel_of(res.per_agent[0].plan) <= 1e-12);

    Fleet wide{{{0, 0}, {10, 101}}, 50.0};
    ConsensusResult bad = solve_fleet(wide);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.per_agent.empty());
}

TEST_CASE("solve_fleet: pair fleet reduces to the pair touch") {
    Fleet f{{{0, 0}, {2, 0}}, 100.0};
    ConsensusResult res = solve_fleet(f);
    REQUIRE(res.feasible);
    CHECK(std::abs(res.t_star - 2.0) <= 1e-6);
    CHECK(res.critical_triplet == std::array<int, 3>{1, 2, 0});
    CHECK(verify_rendezvous(f, res).pass);
}

TEST_CASE("solve_fleet: zero budget") {
    // identical states consense instantly even with nothing to burn
    Fleet same{{{3, 2}, {3, 2}, {3, 2}}, 0.0};
    ConsensusResult res = solve_fleet(same);
    REQUIRE(res.feasible);
    CHECK(res.t_star == 0.0);
    CHECK(res.x_star.pos == 3.0);
    CHECK(verify_rendezvous(same, res).pass);

    // any velocity gap is instantly infeasible
    CHECK_FALSE(solve_fleet({{{0, 0}, {5, 1}}, 0.0}).feasible);

    // equal velocities but distinct positions drift in parallel forever: the
    // feasibility inequality holds with equality and the sets never meet
    CHECK_THROWS_AS((void)solve_fleet({{{0, 0}, {5, 0}}, 0.0}), PairInfeasible);

    CHECK_THROWS_AS((void)solve_fleet({{{0, 0}}, -1.0}), std::invalid_argument);
}

TEST_CASE("solve_fleet: duplicate states collapse") {
    Fleet f{{{1, 2}, {1, 2}, {40, 5}, {-30, -1}}, 8.0};
    ConsensusResult res = solve_fleet(f);
    REQUIRE(res.feasible);
    CHECK(res.triplets_solved == 1); // C(3 distinct, 3)
    REQUIRE(res.per_agent.size() == 4);

    Fleet dedup{{{1, 2}, {40, 5}, {-30, -1}}, 8.0};
    ConsensusResult ref = solve_fleet(dedup);
    CHECK(res.t_star == ref.t_star);
    CHECK(res.x_star.pos == ref.x_star.pos);
    CHECK(verify_rendezvous(f, res).pass);
}

TEST_CASE("hull_filter: corners, collinear, interior") {
    // square corners + center: the center drops out
    std::vector<AgentState> sq{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
    CHECK(hull_filter(sq) == std::vector<int>{1, 2, 3, 4});

    // collinear points all sit on the hull boundary
    std::vector<AgentState> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    CHECK(hull_filter(line) == std::vector<int>{1, 2, 3, 4});

    // tiny inputs pass through
    CHECK(hull_filter({{5, 5}}) == std::vector<int>{1});
    CHECK(hull_filter({{5, 5}, {6, 6}}) == std::vector<int>{1, 2});

    // six-agent run: agents 4 and 5 are strictly interior, and pruning
    // preserves the consensus time
    Fleet f = six_agents();
    CHECK(hull_filter(f.agents) == std::vector<int>{1, 2, 3, 6});
    ConsensusResult full = solve_fleet(f);
    ConsensusResult pruned = solve_fleet(f, {.hull_prune = true});
    CHECK(std::abs(full.t_star - pruned.t_star) <= 1e-6 * (1.0 + full.t_star));
    CHECK(pruned.triplets_solved == 4); // C(4,3)
    CHECK(pruned.per_agent.size() == 6);
    CHECK(verify_rendezvous(f, pruned).pass);
}

TEST_CASE("partition_triplets: disjoint round-robin shares") {
    auto check_partition = [](int n, int workers) {
        const long total = static_cast<long>(n) * (n - 1) * (n - 2) / 6;
        const long cap = (total + workers - 1) / workers;
        std::set<std::array<int, 3>> seen;
        long count = 0;
        for (int w = 1; w <= workers; ++w) {
            auto share = partition_triplets(n, w, workers);
            CHECK(static_cast<long>(share.size()) <= cap);
            for (const auto& t : share) {
                CHECK(t[0] < t[1]);
                CHECK(t[1] < t[2]);
                CHECK(t[2] <= n);
                CHECK(seen.insert(t).second); // disjointness
                ++count;
            }
        }
        CHECK(count == total);
    };
    check_partition(6, 6);
    check_partition(10, 10);
    check_partition(8, 3);

    // n=3, three workers: one worker owns the single triplet
    int owners = 0;
    for (int w = 1; w <= 3; ++w) {
        owners += static_cast<int>(partition_triplets(3, w, 3).size());
    }
    CHECK(owners == 1);

    // fewer than three agents means no triplets, not an error
    CHECK(partition_triplets(2, 1, 2).empty());
    CHECK(partition_triplets(2, 2, 2).empty());

    CHECK_THROWS_AS((void)partition_triplets(6, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)partition_triplets(6, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)partition_triplets(6, 2, 7), std::invalid_argument);
}

TEST_CASE("solve_fleet_distributed: worker counts agree bitwise") {
    Fleet f = six_agents();
    ConsensusResult base = solve_fleet(f);
    for (int workers : {1, 2, 6}) {
        ConsensusResult d = solve_fleet_distributed(f, workers);
        check_same_result(base, d);
        CHECK(d.triplets_solved == 20);
    }
    CHECK_THROWS_AS((void)solve_fleet_distributed(f, 0), std::invalid_argument);

    Fleet r = random_fleet(8);
    check_same_result(solve_fleet(r), solve_fleet_distributed(r, 8));
}

TEST_CASE("solve_fleet: random fleets round-trip and stay monotone") {
    std::uniform_int_distribution<int> N(4, 7);
    for (int trial = 0; trial < 15; ++trial) {
        Fleet f = random_fleet(N(rng));
        ConsensusResult res = solve_fleet(f);
        REQUIRE(res.feasible);

        RendezvousReport rep = verify_rendezvous(f, res);
        CHECK(rep.pass);
        for (const RendezvousAgentReport& a : rep.agents) {
            CHECK(a.fuel_used <= f.beta + 1e-6);
        }

        // dropping the last agent can only shrink the triplet max
        Fleet sub = f;
        sub.agents.pop_back();
        CHECK(res.t_star >= solve_fleet(sub).t_star);

        // hull pruning leaves the time unchanged
        ConsensusResult pruned = solve_fleet(f, {.hull_prune = true});
        CHECK(std::abs(res.t_star - pruned.t_star) <=
              1e-6 * (1.0 + res.t_star));
    }
}
