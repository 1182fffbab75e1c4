#include "fuelcon/attainable.hpp"

#include <algorithm>
#include <cmath>

#include "fuelcon/dynamics.hpp"

namespace fuelcon {
namespace {

// Exact-transfer plan candidates: find every bang-off-bang plan whose endpoint
// is `target` at time tf. For polarity gamma the burn total f (= fuel) solves
//   f^2 - 2 tf f + 4K = 0,
// where K collects the position defect; the smaller root is the only one with
// f <= tf. Switch times follow from the velocity change split between the two
// burns. Returns candidates sorted by fuel use.
std::vector<SwitchPlan> transfer_candidates(const AgentState& x0,
                                            const AgentState& target,
                                            double tf) {
  std::vector<SwitchPlan> out;
  const double dx = target.pos - x0.pos;
  const double dv = target.vel - x0.vel;
  const double scale = std::abs(x0.pos) + std::abs(x0.vel) * tf + tf * tf + 1.0;
  const double teps = kTimeEps * (1.0 + tf);

  // Coasting transfer: no burn at all.
  if (std::abs(dv) <= geom_eps(std::abs(target.vel)) &&
      std::abs(dx - x0.vel * tf) <= geom_eps(scale)) {
    out.push_back({+1, 0.0, tf, tf});
    return out;
  }

  for (int gamma : {+1, -1}) {
    const double g = static_cast<double>(gamma);
    // K for this polarity; sign conventions fold into g.
    const double k = g * (dx - tf * (target.vel + x0.vel) * 0.5) + dv * dv * 0.25;
    double disc = tf * tf - 4.0 * k;
    if (disc < 0.0) {
      if (disc < -geom_eps(tf * tf + 4.0 * std::abs(k))) continue;
      disc = 0.0;
    }
    const double f = tf - std::sqrt(disc);
    if (!std::isfinite(f) || f < -teps) continue;
    double t1 = 0.5 * (g * dv + f);
    double t2 = tf - 0.5 * (f - g * dv);
    t1 = std::clamp(t1, 0.0, tf);
    t2 = std::clamp(t2, 0.0, tf);
    if (t1 > t2 + teps) continue;
    t2 = std::max(t2, t1);
    SwitchPlan p{gamma, t1, t2, tf};
    const AgentState end = apply_plan(x0, p);
    if (std::abs(end.pos - target.pos) > geom_eps(scale) ||
        std::abs(end.vel - target.vel) > geom_eps(std::abs(target.vel) + tf)) {
      continue;
    }
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const SwitchPlan& a, const SwitchPlan& b) {
    return fuel_of(a) < fuel_of(b);
  });
  return out;
}

}  // namespace

VelocityBand velocity_band(const ReachSpec& r) {
  const double m = std::min(r.beta, r.tf);
  return {r.x0.vel - m, r.x0.vel + m, false};
}

SliceExtent slice_extent(const ReachSpec& r, double v) {
  const double m = std::min(r.beta, r.tf);
  const double slack = geom_eps(std::abs(v) + std::abs(r.x0.vel) + m);
  double dv = v - r.x0.vel;
  if (std::abs(dv) > m + slack) {
    throw VelocityOutOfBand("velocity " + std::to_string(v) +
                            " outside reachable band of half-width " +
                            std::to_string(m));
  }
  dv = std::clamp(dv, -m, m);

  const double base = r.x0.pos + r.tf * (v + r.x0.vel) * 0.5;
  SliceExtent s;
  s.v = v;
  if (r.beta < r.tf) {
    // Fuel-binding envelopes: full budget split between the two burns.
    const double bulge = r.tf * r.beta * 0.5 - dv * dv * 0.25 - r.beta * r.beta * 0.25;
    s.x_hi = base + bulge;
    s.x_lo = base - bulge;
  } else {
    // Bang-bang envelopes: switch once, no coast.
    const double su = (dv + r.tf) * 0.5;  // first-burn length for the upper bound
    const double sl = (r.tf - dv) * 0.5;
    s.x_hi = r.x0.pos + r.x0.vel * r.tf + 2.0 * su * r.tf - su * su - r.tf * r.tf * 0.5;
    s.x_lo = r.x0.pos + r.x0.vel * r.tf - 2.0 * sl * r.tf + sl * sl + r.tf * r.tf * 0.5;
  }
  if (s.x_lo > s.x_hi) {  // numerical guard at band edges in the bang-bang regime
    const double mid = 0.5 * (s.x_lo + s.x_hi);
    s.x_lo = s.x_hi = mid;
  }
  return s;
}

Containment contains(const ReachSpec& r, const AgentState& target) {
  Containment c;
  const VelocityBand band = velocity_band(r);
  const double vslack = geom_eps(std::abs(target.vel) + std::abs(r.x0.vel) + r.beta);
  if (!band.contains(target.vel, vslack)) return c;

  const SliceExtent s = slice_extent(r, target.vel);
  const double xslack = geom_eps(std::abs(target.pos) + std::abs(s.x_lo) + std::abs(s.x_hi));
  if (target.pos < s.x_lo - xslack || target.pos > s.x_hi + xslack) return c;

  c.inside = true;
  auto plans = transfer_candidates(r.x0, target, r.tf);
  for (const SwitchPlan& p : plans) {
    if (fuel_of(p) <= r.beta + geom_eps(r.beta)) {
      c.witness = p;
      break;
    }
  }
  if (!c.witness) c.witness = split_transfer_plan(r.x0, target, r.tf, r.beta);
  return c;
}

std::optional<SwitchPlan> split_transfer_plan(const AgentState& x0,
                                              const AgentState& target,
                                              double tf, double fuel_cap) {
  const double dv = target.vel - x0.vel;
  const double adv = std::abs(dv);
  if (adv <= 0.0 || adv > std::min(fuel_cap, tf) + geom_eps(fuel_cap)) {
    return std::nullopt;
  }
  const double g = dv > 0.0 ? 1.0 : -1.0;
  const double span = tf - adv;  // coast length; zero only at the band corner
  const double x_late = x0.pos + x0.vel * tf + g * dv * dv * 0.5;
  // Endpoint is linear in the opening-burn length a:
  //   x(a) = x_late + g * a * (tf - |dv|),  a in [0, |dv|].
  double a = span > 0.0 ? g * (target.pos - x_late) / span : 0.0;
  const double teps = kTimeEps * (1.0 + tf);
  if (a < -teps || a > adv + teps) return std::nullopt;
  a = std::clamp(a, 0.0, adv);
  SwitchPlan p;
  p.gamma = static_cast<int>(g);
  p.gamma_tail = p.gamma;
  p.t1 = a;
  p.t2 = tf - (adv - a);
  p.tf = tf;
  const AgentState end = apply_plan(x0, p);
  const double scale = std::abs(x0.pos) + std::abs(x0.vel) * tf + tf * tf + 1.0;
  if (std::abs(end.pos - target.pos) > geom_eps(scale) ||
      std::abs(end.vel - target.vel) > geom_eps(std::abs(target.vel) + tf)) {
    return std::nullopt;
  }
  return p;
}

std::vector<AgentState> boundary_polyline(const ReachSpec& r, int n) {
  std::vector<AgentState> pts;
  const VelocityBand band = velocity_band(r);
  const double c = 0.5 * (band.v_lo + band.v_hi);
  const double h = 0.5 * (band.v_hi - band.v_lo);

  const double pi = std::acos(-1.0);
  auto station = [&](int j) {
    // Chebyshev spacing: clusters stations near the band edges.
    return c - h * std::cos(pi * static_cast<double>(j) / (n - 1));
  };

  for (int j = 0; j < n; ++j) {
    const double v = station(j);
    pts.push_back({slice_extent(r, v).x_hi, v});
  }
  pts.push_back({slice_extent(r, band.v_hi).x_lo, band.v_hi});
  for (int j = n - 1; j >= 0; --j) {
    const double v = station(j);
    pts.push_back({slice_extent(r, v).x_lo, v});
  }
  pts.push_back(pts.front());  // close the polyline

  const double scale = std::abs(r.x0.pos) + std::abs(r.x0.vel) * r.tf + r.tf * r.tf + 1.0;
  std::vector<AgentState> dedup;
  for (const AgentState& p : pts) {
    if (!dedup.empty() &&
        std::abs(dedup.back().pos - p.pos) <= geom_eps(scale) &&
        std::abs(dedup.back().vel - p.vel) <= geom_eps(scale)) {
      continue;
    }
    dedup.push_back(p);
  }
  if (dedup.size() == 1) dedup.push_back(dedup.front());  // degenerate set: point repeated
  return dedup;
}

VelocityBand consensus_band(const std::vector<AgentState>& agents, double beta) {
  double vmax = agents.front().vel;
  double vmin = agents.front().vel;
  for (const AgentState& a : agents) {
    vmax = std::max(vmax, a.vel);
    vmin = std::min(vmin, a.vel);
  }
  VelocityBand b{vmax - beta, vmin + beta, false};
  b.empty = b.v_lo > b.v_hi;
  return b;
}

bool feasible(const std::vector<AgentState>& agents, double beta) {
  double vmax = agents.front().vel;
  double vmin = agents.front().vel;
  for (const AgentState& a : agents) {
    vmax = std::max(vmax, a.vel);
    vmin = std::min(vmin, a.vel);
  }
  return vmax - vmin <= 2.0 * beta;
}

std::vector<SwitchPlan> exact_transfer_plans(const AgentState& x0,
                                             const AgentState& target,
                                             double tf, double fuel_cap) {
  std::vector<SwitchPlan> out;
  for (const SwitchPlan& p : transfer_candidates(x0, target, tf)) {
    if (fuel_of(p) <= fuel_cap + geom_eps(fuel_cap)) out.push_back(p);
  }
  return out;
}

}  // namespace fuelcon
