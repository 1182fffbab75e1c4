#include "fuelcon/triplet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fuelcon/attainable.hpp"
#include "fuelcon/dynamics.hpp"
#include "fuelcon/synthesis.hpp"

namespace fuelcon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2

double sigma_of(Sequence s) {
  if (s == Sequence::s1) return +1.0;
  if (s == Sequence::s3) return -1.0;
  return 0.0;
}

int gamma_of(Sequence s) {
  // The plan's last phase is -gamma; s1/s4 end with -1, s2/s3 end with +1.
  return (s == Sequence::s1 || s == Sequence::s4) ? +1 : -1;
}

// Full-budget boundary curve of one agent: position on the sigma = +1 (upper)
// or sigma = -1 (lower) envelope at consensus velocity v and horizon tf.
double curve_x(const AgentState& a, double beta, double tf, double v, double sigma) {
  return a.pos + tf * (v + a.vel) * 0.5 +
         sigma * (tf * beta * 0.5 - (v - a.vel) * (v - a.vel) * 0.25 -
                  beta * beta * 0.25);
}

struct GapPoint {
  double gap = -kInf;
  double v = 0.0;
  double x = 0.0;
};

GapPoint eval_gap(const std::vector<ReachSpec>& sets, double v) {
  double hi = kInf;
  double lo = -kInf;
  for (const ReachSpec& r : sets) {
    const SliceExtent s = slice_extent(r, v);
    hi = std::min(hi, s.x_hi);
    lo = std::max(lo, s.x_lo);
  }
  return {hi - lo, v, 0.5 * (hi + lo)};
}

GapPoint golden_max(const std::vector<ReachSpec>& sets, double a, double b) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = eval_gap(sets, c).gap;
  double gd = eval_gap(sets, d).gap;
  const double tol = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
  while (b - a > tol) {
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = eval_gap(sets, d).gap;
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = eval_gap(sets, c).gap;
    }
  }
  return eval_gap(sets, 0.5 * (a + b));
}

// Largest slice overlap over the common velocity band. The overlap is a
// minimum of concave envelopes minus a maximum of convex ones, hence concave
// in v; a coarse scan brackets the peak, golden-section refines it, and a
// dense fallback scan guards the (theoretically impossible) non-unimodal
// case.
GapPoint max_gap(const std::vector<AgentState>& agents, double beta, double t) {
  const double m = std::min(beta, t);
  double lo = -kInf;
  double hi = kInf;
  for (const AgentState& a : agents) {
    lo = std::max(lo, a.vel - m);
    hi = std::min(hi, a.vel + m);
  }
  if (lo > hi) return {};

  std::vector<ReachSpec> sets;
  sets.reserve(agents.size());
  for (const AgentState& a : agents) sets.push_back({a, beta, t});

  if (hi - lo <= 1e-14 * (1.0 + std::abs(lo))) {
    return eval_gap(sets, 0.5 * (lo + hi));
  }

  auto scan = [&](int stations) {
    int best = 0;
    double best_gap = -kInf;
    for (int j = 0; j < stations; ++j) {
      const double v = lo + (hi - lo) * j / (stations - 1);
      const double g = eval_gap(sets, v).gap;
      if (g > best_gap) {
        best_gap = g;
        best = j;
      }
    }
    const double va = lo + (hi - lo) * std::max(best - 1, 0) / (stations - 1);
    const double vb = lo + (hi - lo) * std::min(best + 1, stations - 1) / (stations - 1);
    return std::pair<GapPoint, double>{golden_max(sets, va, vb), best_gap};
  };

  auto [peak, coarse_best] = scan(33);
  if (peak.gap < coarse_best - 1e-9 * (1.0 + std::abs(coarse_best))) {
    peak = scan(512).first;  // unimodality check failed; dense fallback
  }
  return peak;
}

struct TouchScale {
  double diam = 0.0;     // max pairwise distance between initial states
  double dx_max = 0.0;   // max pairwise position offset
  double spread = 0.0;   // velocity spread
};

TouchScale touch_scale(const std::vector<AgentState>& agents) {
  TouchScale s;
  for (size_t i = 0; i < agents.size(); ++i) {
    for (size_t j = i + 1; j < agents.size(); ++j) {
      const double dx = agents[i].pos - agents[j].pos;
      const double dv = agents[i].vel - agents[j].vel;
      s.diam = std::max(s.diam, std::hypot(dx, dv));
      s.dx_max = std::max(s.dx_max, std::abs(dx));
      s.spread = std::max(s.spread, std::abs(dv));
    }
  }
  return s;
}

// First time at which all the agents' attainable sets intersect, found by
// doubling then bisecting the monotone overlap predicate. `t_false` is a
// time already known to lack a common point (0 if unknown).
PairTouch first_touch(const std::vector<AgentState>& agents, double beta,
                      double t_false) {
  auto intersects = [&](double t) { return max_gap(agents, beta, t).gap >= 0.0; };

  if (t_false <= 0.0 && intersects(0.0)) {
    const GapPoint g = max_gap(agents, beta, 0.0);
    return {0.0, {g.x, g.v}};
  }

  const TouchScale sc = touch_scale(agents);
  const double rho = beta - sc.spread * 0.5;  // worst-case overlap closing rate
  const double cap =
      std::max(4.0 * (sc.diam + 2.0 * beta + 1.0),
               (sc.dx_max + beta * beta + sc.spread * sc.spread * 0.25 + 1.0) /
                       std::max(rho, 1e-9) +
                   4.0 * beta + 4.0);

  double lo = std::max(t_false, 0.0);
  double hi = std::max(1.0, lo + 1.0);
  while (!intersects(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) {
      if (!intersects(cap)) {
        throw PairInfeasible(
            "attainable sets do not meet within the bracketing horizon " +
            std::to_string(cap) +
            " (possible only at the exact feasibility-equality edge)");
      }
      hi = cap;
      break;
    }
  }
  while (hi - lo > 1e-9 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    (intersects(mid) ? hi : lo) = mid;
  }
  const GapPoint g = max_gap(agents, beta, hi);
  return {hi, {g.x, g.v}};
}

// Robust real roots of a*t^2 + b*t + c = 0, ascending.
std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> roots;
  const double scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) > 1e-14 * scale) roots.push_back(-c / b);
    return roots;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * (b * b + std::abs(4.0 * a * c))) return roots;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  roots.push_back(q / a);
  if (std::abs(q) > 0.0) {
    roots.push_back(c / q);
  } else {
    roots.push_back(0.0);
  }
  std::sort(roots.begin(), roots.end());
  if (roots.size() == 2 && roots[0] == roots[1]) roots.pop_back();
  return roots;
}

// Plan reaching the target exactly: mirrored-burn if one exists, else the
// same-sign split-burn transfer. The nearest-substitute fallback (cap-corner
// plans, coasting) only fires when the target is off the set by more than the
// transfer solvers' slack, i.e. on bisection-sourced points.
std::pair<SwitchPlan, bool> plan_or_nearest(const AgentState& x0,
                                            const AgentState& xbar, double tf,
                                            double beta) {
  auto plans = exact_transfer_plans(x0, xbar, tf, beta);
  if (!plans.empty()) return {plans.front(), true};
  if (auto split = split_transfer_plan(x0, xbar, tf, beta)) return {*split, true};

  const double m = std::min(beta, tf);
  const int sgn = xbar.vel >= x0.vel ? +1 : -1;
  const std::array<SwitchPlan, 3> fallbacks{
      SwitchPlan{-sgn, 0.0, tf - m, tf},  // burn at the end: low-|x| cap corner
      SwitchPlan{+sgn, m, tf, tf},        // burn at the start: high-|x| cap corner
      SwitchPlan{+1, 0.0, tf, tf},        // coast
  };
  SwitchPlan best = fallbacks[0];
  double best_d = kInf;
  for (const SwitchPlan& p : fallbacks) {
    const AgentState end = apply_plan(x0, p);
    const double d = std::hypot(end.pos - xbar.pos, end.vel - xbar.vel);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return {best, false};
}

// Ordering, budget, and endpoint-reproduction filter for one recovered plan.
// Snaps roundoff-level violations onto the feasible region.
bool plan_ok(const AgentState& x0, SwitchPlan& p, const AgentState& xbar,
             double beta) {
  const double teps = kTimeEps * (1.0 + p.tf);
  if (p.t1 < -teps || p.t2 < p.t1 - teps || p.tf < p.t2 - teps) return false;
  p.t1 = std::clamp(p.t1, 0.0, p.tf);
  p.t2 = std::clamp(p.t2, p.t1, p.tf);
  if (fuel_of(p) > beta + geom_eps(beta)) return false;
  const AgentState end = apply_plan(x0, p);
  const double xscale =
      std::abs(xbar.pos) + std::abs(x0.pos) + std::abs(x0.vel) * p.tf + p.tf * p.tf;
  return std::abs(end.pos - xbar.pos) <= geom_eps(xscale) &&
         std::abs(end.vel - xbar.vel) <= geom_eps(std::abs(xbar.vel) + p.tf);
}

}  // namespace

const char* sequence_name(Sequence s) {
  switch (s) {
    case Sequence::s1: return "s1";
    case Sequence::s2: return "s2";
    case Sequence::s3: return "s3";
    case Sequence::s4: return "s4";
  }
  return "?";
}

const std::array<Scenario, 20>& scenario_table() {
  using enum Sequence;
  static const std::array<Scenario, 20> table{{
      {1, {s1, s3, s1}},  {2, {s1, s1, s3}},  {3, {s1, s3, s3}},
      {4, {s3, s1, s1}},  {5, {s3, s3, s1}},  {6, {s3, s1, s3}},
      {7, {s3, s2, s3}},  {8, {s3, s2, s1}},  {9, {s3, s1, s2}},
      {10, {s3, s1, s4}}, {11, {s3, s4, s1}}, {12, {s2, s3, s1}},
      {13, {s2, s1, s3}}, {14, {s2, s1, s1}}, {15, {s1, s3, s2}},
      {16, {s1, s3, s4}}, {17, {s1, s2, s3}}, {18, {s1, s4, s3}},
      {19, {s4, s3, s1}}, {20, {s4, s1, s3}},
  }};
  return table;
}

PairTouch pair_min_time(const AgentState& a, const AgentState& b, double beta) {
  const double dv = std::abs(a.vel - b.vel);
  if (dv > 2.0 * beta + geom_eps(std::abs(a.vel) + std::abs(b.vel) + beta)) {
    throw PairInfeasible("velocity gap " + std::to_string(dv) +
                         " exceeds 2*beta = " + std::to_string(2.0 * beta));
  }
  if (a.pos == b.pos && a.vel == b.vel) return {0.0, a};
  return first_touch({a, b}, beta, 0.0);
}

std::vector<ScenarioCandidate> scenario_solve(const Scenario& sc,
                                              const AgentState& xi,
                                              const AgentState& xj,
                                              const AgentState& xk,
                                              double beta) {
  const std::array<AgentState, 3> A{xi, xj, xk};
  std::vector<ScenarioCandidate> out;

  int pinned = -1;  // index of the s2/s4 member, if any
  for (int n = 0; n < 3; ++n) {
    if (sigma_of(sc.seqs[n]) == 0.0) pinned = n;
  }

  if (pinned < 0) {
    // Pure s1/s3 scenario: the equal-sequence pair (p,q) yields a relation
    // linear in (vbar, tf); substituting into the mixed agent r's equation
    // gives a quadratic in tf.
    int p = -1, q = -1, r = -1;
    for (int m = 0; m < 3 && p < 0; ++m) {
      for (int n = m + 1; n < 3; ++n) {
        if (sc.seqs[m] == sc.seqs[n]) {
          p = m;
          q = n;
          r = 3 - m - n;
          break;
        }
      }
    }
    const double sig = sigma_of(sc.seqs[p]);
    const double dvpq = A[p].vel - A[q].vel;
    if (std::abs(dvpq) <= 1e-9 * (1.0 + std::abs(A[p].vel) + std::abs(A[q].vel))) {
      throw DegenerateScenario("equal-sequence agents share initial velocity");
    }
    const double v0 = 0.5 * (A[p].vel + A[q].vel) -
                      sig * 2.0 * (A[p].pos - A[q].pos) / dvpq;  // vbar = v0 - sig*tf
    const double qa = -sig * 0.5;
    const double qb = 0.5 * (A[p].vel - A[r].vel) + sig * beta +
                      0.5 * (2.0 * v0 - A[p].vel - A[r].vel);
    const double qc = (A[p].pos - A[r].pos) -
                      sig * ((v0 - A[p].vel) * (v0 - A[p].vel) +
                             (v0 - A[r].vel) * (v0 - A[r].vel)) * 0.25 -
                      sig * beta * beta * 0.5;
    for (double tf : quadratic_roots(qa, qb, qc)) {
      if (!(tf > kTimeEps) || !std::isfinite(tf)) continue;
      const double vbar = v0 - sig * tf;
      out.push_back({tf, {curve_x(A[p], beta, tf, vbar, sig), vbar}});
    }
  } else {
    // The s2/s4 member pins vbar at its band edge; the two curve equations
    // are then linear in (xbar, tf).
    const double vbar =
        A[pinned].vel + (sc.seqs[pinned] == Sequence::s2 ? beta : -beta);
    const int a = pinned == 0 ? 1 : 0;
    const int b = pinned == 2 ? 1 : 2;
    const double sa = sigma_of(sc.seqs[a]);
    const double sb = sigma_of(sc.seqs[b]);
    const double den = 0.5 * (A[a].vel - A[b].vel) + 0.5 * beta * (sa - sb);
    if (std::abs(den) <= 1e-9 * (1.0 + std::abs(A[a].vel) + std::abs(A[b].vel) + beta)) {
      throw DegenerateScenario("curve equations are parallel in tf");
    }
    const double num = sa * (vbar - A[a].vel) * (vbar - A[a].vel) * 0.25 -
                       sb * (vbar - A[b].vel) * (vbar - A[b].vel) * 0.25 +
                       beta * beta * (sa - sb) * 0.25 - (A[a].pos - A[b].pos);
    const double tf = num / den;
    if (tf > kTimeEps && std::isfinite(tf)) {
      out.push_back({tf, {curve_x(A[a], beta, tf, vbar, sa), vbar}});
    }
  }

  std::sort(out.begin(), out.end(),
            [](const ScenarioCandidate& a, const ScenarioCandidate& b) {
              return a.tf < b.tf;
            });
  return out;
}

SwitchTimes recover_switchings(const AgentState& x0, const AgentState& xbar,
                               double tf, Sequence seq, double beta) {
  switch (seq) {
    case Sequence::s1:
      return {0.5 * (xbar.vel + beta - x0.vel),
              0.5 * (xbar.vel - beta + 2.0 * tf - x0.vel)};
    case Sequence::s3:
      return {0.5 * (-xbar.vel + beta + x0.vel),
              0.5 * (-xbar.vel - beta + 2.0 * tf + x0.vel)};
    case Sequence::s2:
    case Sequence::s4: {
      const double drift = xbar.pos - x0.pos - tf * x0.vel;
      double rad = 2.0 * (seq == Sequence::s2 ? drift : -drift);
      if (rad < 0.0) {
        if (rad < -geom_eps(std::abs(xbar.pos) + std::abs(x0.pos) +
                            std::abs(x0.vel) * tf)) {
          throw NegativeRadicand("coast distance unreachable for " +
                                 std::string(sequence_name(seq)));
        }
        rad = 0.0;
      }
      return {0.0, tf - std::sqrt(rad)};
    }
  }
  return {};
}

TripletSolution solve_triplet(const AgentState& xi, const AgentState& xj,
                              const AgentState& xk, double beta) {
  const std::array<AgentState, 3> A{xi, xj, xk};
  if (!feasible({xi, xj, xk}, beta)) {
    throw TripletInfeasible("velocity spread exceeds 2*beta");
  }

  auto finish = [&](double t, const AgentState& point,
                    std::optional<Scenario> sc) {
    TripletSolution sol;
    sol.t_star = t;
    sol.x_star = point;
    sol.scenario = std::move(sc);
    for (int n = 0; n < 3; ++n) {
      auto [plan, exact] = plan_or_nearest(A[n], point, t, beta);
      sol.plans[n] = plan;
      sol.plans_exact = sol.plans_exact && exact;
    }
    return sol;
  };

  // Duplicate states degrade to the pair / single problem.
  std::vector<AgentState> uniq;
  for (const AgentState& a : A) {
    const bool seen = std::any_of(uniq.begin(), uniq.end(), [&](const AgentState& u) {
      return u.pos == a.pos && u.vel == a.vel;
    });
    if (!seen) uniq.push_back(a);
  }
  if (uniq.size() == 1) return finish(0.0, uniq.front(), std::nullopt);
  if (uniq.size() == 2) {
    const PairTouch touch = pair_min_time(uniq[0], uniq[1], beta);
    return finish(touch.t, touch.point, std::nullopt);
  }

  // Pairwise intersection times; the pair attaining the max is checked first.
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
  std::array<PairTouch, 3> touch;
  int worst = 0;
  for (int n = 0; n < 3; ++n) {
    touch[n] = pair_min_time(A[pairs[n][0]], A[pairs[n][1]], beta);
    if (touch[n].t > touch[worst].t) worst = n;
  }
  const double t_low = touch[worst].t;
  const int third = 3 - pairs[worst][0] - pairs[worst][1];

  // Case 1: the latest pair's touch point already lies in the third set.
  if (contains({A[third], beta, t_low}, touch[worst].point).inside) {
    return finish(t_low, touch[worst].point, std::nullopt);
  }

  // Case 2: enumerate the boundary scenarios and keep candidates whose
  // recovered plans are feasible for all three agents.
  struct Survivor {
    double tf = kInf;
    int id = std::numeric_limits<int>::max();
    AgentState xbar;
    Scenario sc;
    std::array<SwitchPlan, 3> plans;
  };
  std::optional<Survivor> best;

  for (const Scenario& sc : scenario_table()) {
    std::vector<ScenarioCandidate> cands;
    try {
      cands = scenario_solve(sc, A[0], A[1], A[2], beta);
    } catch (const DegenerateScenario&) {
      continue;  // the bisection fallback below covers degenerate geometry
    }
    for (const ScenarioCandidate& cand : cands) {
      if (cand.tf < t_low - 1e-6 * (1.0 + t_low)) continue;
      std::array<SwitchPlan, 3> plans{};
      bool ok = true;
      for (int n = 0; n < 3 && ok; ++n) {
        try {
          const SwitchTimes st =
              recover_switchings(A[n], cand.xbar, cand.tf, sc.seqs[n], beta);
          plans[n] = {gamma_of(sc.seqs[n]), st.t1, st.t2, cand.tf};
          ok = plan_ok(A[n], plans[n], cand.xbar, beta);
        } catch (const NegativeRadicand&) {
          ok = false;
        }
      }
      if (!ok) continue;
      if (!best || cand.tf < best->tf ||
          (cand.tf == best->tf && sc.id < best->id)) {
        best = Survivor{cand.tf, sc.id, cand.xbar, sc, plans};
      }
    }
  }

  // Cross-check against the first-intersection bisection; it also covers
  // degenerate scenarios, missed enumerations, and flat-cap touch points.
  const PairTouch bis = first_touch({A[0], A[1], A[2]}, beta, t_low);
  const double tie = 1e-6 * (1.0 + bis.t);

  if (best && best->tf <= bis.t + tie) {
    TripletSolution sol;
    sol.t_star = best->tf;
    sol.x_star = best->xbar;
    sol.scenario = best->sc;
    sol.plans = best->plans;
    sol.plans_exact = true;
    return sol;
  }
  return finish(bis.t, bis.point, std::nullopt);
}

}  // namespace fuelcon
