#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuelcon {

// Planar state (position, velocity) of one double-integrator agent.
struct AgentState {
  double pos = 0.0;
  double vel = 0.0;
};

// Bang-off-bang control law on [0, tf]:
//   u(t) = gamma on [0, t1], 0 on [t1, t2], tail on [t2, tf],
// with gamma in {+1, -1} and 0 <= t1 <= t2 <= tf. Fuel use is tf - t2 + t1.
//
// The closing burn mirrors the opening one (tail = -gamma, gamma_tail = 0)
// except for split-burn transfers: targets strictly between the pure-late and
// pure-early burn endpoints at a given terminal velocity are reachable only
// when both burns push the same way, so gamma_tail = gamma there.
struct SwitchPlan {
  int gamma = 1;
  double t1 = 0.0;
  double t2 = 0.0;
  double tf = 0.0;
  int gamma_tail = 0;  // 0 = mirrored closing burn (-gamma)

  int tail() const { return gamma_tail == 0 ? -gamma : gamma_tail; }
};

struct TrajectoryPoint {
  double t = 0.0;
  AgentState state;
};

struct ControlPoint {
  double t = 0.0;
  double u = 0.0;
};

// Sampled rollout of a plan; times strictly increasing from 0 to plan.tf.
struct Trajectory {
  std::vector<TrajectoryPoint> samples;
  std::vector<ControlPoint> control;
};

// Absolute slack used for time orderings (t1 <= t2 etc.).
inline constexpr double kTimeEps = 1e-9;

// State comparisons are mixed-tolerance: positions reach O(1e3) in realistic
// runs, so a pure absolute tolerance would be wrong.
inline constexpr double kStateAtol = 1e-6;
inline constexpr double kStateRtol = 1e-9;

// Base geometric slack; scaled by coordinate magnitude where used.
// Overridable through the FUELCON_EPS environment variable.
inline double geom_eps_base() {
  static const double cached = [] {
    if (const char* s = std::getenv("FUELCON_EPS")) {
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end != s && v > 0.0 && std::isfinite(v)) return v;
    }
    return 1e-6;
  }();
  return cached;
}

inline double geom_eps(double scale) {
  return geom_eps_base() * (1.0 + std::abs(scale));
}

inline bool close(double a, double b,
                  double atol = kStateAtol, double rtol = kStateRtol) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

inline bool state_close(const AgentState& a, const AgentState& b,
                        double atol = kStateAtol, double rtol = kStateRtol) {
  return close(a.pos, b.pos, atol, rtol) && close(a.vel, b.vel, atol, rtol);
}

struct VelocityOutOfBand : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PairInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TripletInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeRadicand : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoScenarioFeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SynthesisFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoCommonPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConsensusWithinHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fuelcon
