#include "fuelcon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fuelcon/dynamics.hpp"

namespace fuelcon {
namespace {

std::vector<double> grid_stations(double lo, double hi, double step) {
  std::vector<double> out;
  for (double t = lo; t < hi - 1e-12 * (1.0 + hi); t += step) out.push_back(t);
  out.push_back(hi);
  return out;
}

// Endpoint of the profile: u = s for a seconds, coast, then u = r for the
// final b seconds of the horizon tf.
AgentState two_burn_end(const AgentState& x0, double tf, int s, double a,
                        int r, double b) {
  const double v1 = x0.vel + s * a;
  const double pos = x0.pos + x0.vel * tf + s * (a * tf - 0.5 * a * a) +
                     r * 0.5 * b * b;
  return {pos, v1 + r * b};
}

}  // namespace

std::vector<AgentState> oracle_reachable(const AgentState& x0, double beta,
                                         double tf, double grid_step) {
  std::vector<AgentState> out;
  if (tf < 0.0) return out;
  const std::vector<double> t1s = grid_stations(0.0, tf, grid_step);
  for (int gamma : {+1, -1}) {
    for (double t1 : t1s) {
      for (double t2 : grid_stations(t1, tf, grid_step)) {
        const double fuel = t1 + (tf - t2);
        if (fuel > beta + 1e-12 * (1.0 + beta)) continue;
        out.push_back(apply_plan(x0, {gamma, t1, t2, tf}));
      }
    }
  }
  return out;
}

OracleSlice oracle_slice(const AgentState& x0, double beta, double tf,
                         double v) {
  OracleSlice res;
  res.v = v;
  const double budget = std::min(beta, tf);
  const double dv = v - x0.vel;
  if (std::abs(dv) > budget + 1e-12 * (1.0 + budget)) return res;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  // First burn s*a, second burn r*b with s*a + r*b = dv. For fixed signs the
  // endpoint position is monotone in a, so only the feasible interval's two
  // endpoints matter.
  for (int s : {+1, -1}) {
    for (int r : {+1, -1}) {
      // b = r*(dv - s*a) >= 0 and a + b <= budget bound the parameter a.
      double a_lo = 0.0;
      double a_hi = budget;
      if (r * s > 0) {
        // same sign: a + b = |dv| is fixed; a ranges over [0, |dv|]
        if (s * dv < 0.0) continue;
        a_hi = std::min(a_hi, s * dv);
      } else {
        // opposite sign: fuel a + b = 2a - s*dv grows with a
        a_lo = std::max(0.0, s * dv);
        a_hi = std::min(a_hi, 0.5 * (budget + s * dv));
      }
      if (a_lo > a_hi + 1e-15 * (1.0 + budget)) continue;
      for (double a : {a_lo, a_hi}) {
        const double b = r * (dv - s * a);
        const AgentState end = two_burn_end(x0, tf, s, a, r, std::max(b, 0.0));
        lo = std::min(lo, end.pos);
        hi = std::max(hi, end.pos);
      }
    }
  }
  if (lo <= hi) {
    res.reachable = true;
    res.x_lo = lo;
    res.x_hi = hi;
  }
  return res;
}

OracleConsensus oracle_min_consensus(const std::vector<AgentState>& agents,
                                     double beta, double t_step,
                                     double grid_step, double t_max) {
  const double cell = grid_step;

  // Shared-cell test at one time: for every grid velocity inside the common
  // band, intersect the agents' position cell ranges.
  auto share = [&](double t, OracleConsensus* hit) {
    const double m = std::min(beta, t);
    double vlo = -std::numeric_limits<double>::infinity();
    double vhi = -vlo;
    for (const AgentState& a : agents) {
      vlo = std::max(vlo, a.vel - m);
      vhi = std::min(vhi, a.vel + m);
    }
    if (vlo > vhi) return false;
    const long iv_lo = std::lround(std::ceil(vlo / cell - 1e-9));
    const long iv_hi = std::lround(std::floor(vhi / cell + 1e-9));
    for (long iv = iv_lo; iv <= iv_hi; ++iv) {
      const double v = iv * cell;
      long c_lo = std::numeric_limits<long>::min();
      long c_hi = std::numeric_limits<long>::max();
      bool ok = true;
      for (const AgentState& a : agents) {
        const OracleSlice s = oracle_slice(a, beta, t, v);
        if (!s.reachable) {
          ok = false;
          break;
        }
        c_lo = std::max(c_lo, std::lround(std::floor(s.x_lo / cell)));
        c_hi = std::min(c_hi, std::lround(std::floor(s.x_hi / cell)));
      }
      if (ok && c_lo <= c_hi) {
        if (hit) {
          hit->t = t;
          hit->point = {(c_lo + 0.5) * cell, v};
        }
        return true;
      }
    }
    return false;
  };

  // Coarse sweep, then a fine pass from the preceding coarse station.
  const double coarse = std::max(t_step, 64.0 * t_step);
  double coarse_hit = -1.0;
  for (double t = 0.0; t <= t_max + 1e-12; t += coarse) {
    if (share(t, nullptr)) {
      coarse_hit = t;
      break;
    }
  }
  if (coarse_hit < 0.0) {
    throw NoConsensusWithinHorizon("no shared cell up to t_max = " +
                                   std::to_string(t_max));
  }
  OracleConsensus res;
  for (double t = std::max(0.0, coarse_hit - coarse); t <= coarse_hit + 1e-12;
       t += t_step) {
    if (share(t, &res)) return res;
  }
  share(coarse_hit, &res);
  res.t = coarse_hit;
  return res;
}

}  // namespace fuelcon
