#include "fuelcon/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace fuelcon {

AgentState propagate(const AgentState& s, double u, double dt) {
  return {s.pos + s.vel * dt + 0.5 * u * dt * dt, s.vel + u * dt};
}

AgentState apply_plan(const AgentState& x0, const SwitchPlan& p) {
  AgentState s = propagate(x0, static_cast<double>(p.gamma), p.t1);
  s = propagate(s, 0.0, p.t2 - p.t1);
  return propagate(s, static_cast<double>(p.tail()), p.tf - p.t2);
}

AgentState apply_plan_until(const AgentState& x0, const SwitchPlan& p, double t) {
  t = std::clamp(t, 0.0, p.tf);
  AgentState s = propagate(x0, static_cast<double>(p.gamma), std::min(t, p.t1));
  if (t <= p.t1) return s;
  s = propagate(s, 0.0, std::min(t, p.t2) - p.t1);
  if (t <= p.t2) return s;
  return propagate(s, static_cast<double>(p.tail()), t - p.t2);
}

double control_at(const SwitchPlan& p, double t) {
  if (t < 0.0 || t > p.tf) return 0.0;
  if (t < p.t1) return static_cast<double>(p.gamma);
  if (t < p.t2) return 0.0;
  return static_cast<double>(p.tail());
}

double fuel_of(const SwitchPlan& p) { return p.tf - p.t2 + p.t1; }

bool plan_valid(const SwitchPlan& p, double eps) {
  if (p.gamma != 1 && p.gamma != -1) return false;
  if (p.gamma_tail != 0 && p.gamma_tail != 1 && p.gamma_tail != -1) return false;
  if (!std::isfinite(p.t1) || !std::isfinite(p.t2) || !std::isfinite(p.tf)) return false;
  return p.t1 >= -eps && p.t2 >= p.t1 - eps && p.tf >= p.t2 - eps;
}

Trajectory sample_trajectory(const AgentState& x0, const SwitchPlan& p, int n) {
  std::vector<double> times;
  times.reserve(static_cast<size_t>(n) + 2);
  for (int i = 0; i < n; ++i) {
    times.push_back(n == 1 ? 0.0 : p.tf * static_cast<double>(i) / (n - 1));
  }
  times.push_back(p.t1);
  times.push_back(p.t2);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <= kTimeEps * (1.0 + p.tf);
                          }),
              times.end());

  Trajectory tr;
  tr.samples.reserve(times.size());
  tr.control.reserve(times.size());
  for (double t : times) {
    tr.samples.push_back({t, apply_plan_until(x0, p, t)});
    tr.control.push_back({t, control_at(p, t)});
  }
  if (!tr.samples.empty()) {
    tr.samples.back() = {p.tf, apply_plan(x0, p)};  // endpoint exact by construction
  }
  return tr;
}

}  // namespace fuelcon
