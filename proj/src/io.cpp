#include "fuelcon/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fuelcon/attainable.hpp"
#include "fuelcon/dynamics.hpp"

namespace fuelcon {
namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

double require_number(const json& j, const std::string& at) {
  const auto it = j.find(at);
  if (it == j.end() || !it->is_number()) {
    throw ParseError(at + ": missing or not a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(at + ": not finite");
  return v;
}

int require_int(const json& j, const std::string& at) {
  const auto it = j.find(at);
  if (it == j.end() || !it->is_number_integer()) {
    throw ParseError(at + ": missing or not an integer");
  }
  return it->get<int>();
}

std::string require_string(const json& j, const std::string& at) {
  const auto it = j.find(at);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(at + ": missing or not a string");
  }
  return it->get<std::string>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text,
                const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(std::string("cannot write ") + what + ": " + path);
  out << text;
}

double infeasibility_margin_of(const FleetFile& ff) {
  double vmax = ff.agents.front().v;
  double vmin = vmax;
  for (const FleetFileAgent& a : ff.agents) {
    vmax = std::max(vmax, a.v);
    vmin = std::min(vmin, a.v);
  }
  return (vmax - vmin) - 2.0 * ff.beta;
}

}  // namespace

std::string fmt12(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

FleetFile parse_fleet_file(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("top level: not an object");

  FleetFile f;
  f.schema_version = require_string(j, "schema_version");
  if (f.schema_version != "1") {
    throw ParseError("schema_version: unsupported value \"" + f.schema_version +
                     "\" (expected \"1\")");
  }
  f.beta = require_number(j, "beta");
  if (f.beta < 0.0) throw ParseError("beta: must be >= 0");

  const auto agents = j.find("agents");
  if (agents == j.end() || !agents->is_array() || agents->empty()) {
    throw ParseError("agents: missing, not an array, or empty");
  }
  std::set<int> seen;
  for (size_t i = 0; i < agents->size(); ++i) {
    const json& e = (*agents)[i];
    const std::string at = "agents[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ParseError(at + ": not an object");
    FleetFileAgent a;
    a.id = require_int(e, "id");
    a.x = require_number(e, "x");
    a.v = require_number(e, "v");
    if (!seen.insert(a.id).second) {
      throw ParseError(at + ".id: duplicate id " + std::to_string(a.id));
    }
    f.agents.push_back(a);
  }
  return f;
}

std::string serialize_fleet_file(const FleetFile& f) {
  json j;
  j["schema_version"] = f.schema_version;
  j["beta"] = f.beta;
  json agents = json::array();
  for (const FleetFileAgent& a : f.agents) {
    agents.push_back({{"id", a.id}, {"x", a.x}, {"v", a.v}});
  }
  j["agents"] = std::move(agents);
  return j.dump(2) + "\n";
}

FleetFile load_fleet_file(const std::string& path) {
  return parse_fleet_file(read_file(path));
}

Fleet to_fleet(const FleetFile& f) {
  Fleet fleet;
  fleet.beta = f.beta;
  fleet.agents.reserve(f.agents.size());
  for (const FleetFileAgent& a : f.agents) fleet.agents.push_back({a.x, a.v});
  return fleet;
}

ReportFile parse_report(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("top level: not an object");

  ReportFile r;
  r.schema_version = require_string(j, "schema_version");
  if (r.schema_version != "1") {
    throw ParseError("schema_version: unsupported value \"" + r.schema_version +
                     "\"");
  }
  const auto feas = j.find("feasible");
  if (feas == j.end() || !feas->is_boolean()) {
    throw ParseError("feasible: missing or not a boolean");
  }
  r.feasible = feas->get<bool>();

  const auto timing = j.find("timing");
  if (timing == j.end() || !timing->is_object()) {
    throw ParseError("timing: missing or not an object");
  }
  r.timing.solve_seconds = require_number(*timing, "solve_seconds");
  r.timing.workers = require_int(*timing, "workers");

  if (!r.feasible) {
    r.infeasibility_margin = require_number(j, "infeasibility_margin");
    return r;
  }

  r.t_star = require_number(j, "t_star");
  const auto xs = j.find("x_star");
  if (xs == j.end() || !xs->is_object()) {
    throw ParseError("x_star: missing or not an object");
  }
  r.x_star = {require_number(*xs, "x"), require_number(*xs, "v")};

  const auto crit = j.find("critical_triplet");
  if (crit == j.end() || !crit->is_array() || crit->size() != 3) {
    throw ParseError("critical_triplet: missing or not an array of 3 ids");
  }
  for (int n = 0; n < 3; ++n) {
    if (!(*crit)[n].is_number_integer()) {
      throw ParseError("critical_triplet[" + std::to_string(n) +
                       "]: not an integer");
    }
    r.critical_triplet[n] = (*crit)[n].get<int>();
  }

  const auto agents = j.find("per_agent");
  if (agents == j.end() || !agents->is_array() || agents->empty()) {
    throw ParseError("per_agent: missing, not an array, or empty");
  }
  for (size_t i = 0; i < agents->size(); ++i) {
    const json& e = (*agents)[i];
    const std::string at = "per_agent[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ParseError(at + ": not an object");
    ReportAgent a;
    a.id = require_int(e, "id");
    a.sequence = require_string(e, "sequence");
    a.gamma = require_int(e, "gamma");
    if (a.gamma != 1 && a.gamma != -1) {
      throw ParseError(at + ".gamma: must be +1 or -1");
    }
    a.t1 = require_number(e, "t1");
    a.t2 = require_number(e, "t2");
    a.beta_eff = require_number(e, "beta_eff");
    a.fuel_used = require_number(e, "fuel_used");
    a.terminal_error = require_number(e, "terminal_error");
    r.per_agent.push_back(std::move(a));
  }
  return r;
}

std::string serialize_report(const ReportFile& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["feasible"] = r.feasible;
  j["timing"] = {{"solve_seconds", r.timing.solve_seconds},
                 {"workers", r.timing.workers}};
  if (!r.feasible) {
    j["infeasibility_margin"] = r.infeasibility_margin;
    return j.dump(2) + "\n";
  }
  j["t_star"] = r.t_star;
  j["x_star"] = {{"x", r.x_star.pos}, {"v", r.x_star.vel}};
  j["critical_triplet"] = r.critical_triplet;
  json agents = json::array();
  for (const ReportAgent& a : r.per_agent) {
    agents.push_back({{"id", a.id},
                      {"sequence", a.sequence},
                      {"gamma", a.gamma},
                      {"t1", a.t1},
                      {"t2", a.t2},
                      {"beta_eff", a.beta_eff},
                      {"fuel_used", a.fuel_used},
                      {"terminal_error", a.terminal_error}});
  }
  j["per_agent"] = std::move(agents);
  return j.dump(2) + "\n";
}

ReportFile load_report(const std::string& path) {
  return parse_report(read_file(path));
}

std::string sequence_tag_of(const SwitchPlan& p) {
  const double teps = kTimeEps * (1.0 + p.tf);
  const bool first_burn = p.t1 > teps;
  const bool last_burn = p.t2 < p.tf - teps;
  if (!first_burn && !last_burn) return "off";
  if (!first_burn) return p.tail() > 0 ? "s2" : "s4";
  if (last_burn && p.tail() == p.gamma) return p.gamma > 0 ? "s5" : "s6";
  return p.gamma > 0 ? "s1" : "s3";
}

// Inverse of sequence_tag_of for the closing-burn sign; every tag except the
// split-burn pair means a mirrored closing burn.
static int tail_from_tag(const std::string& tag, int gamma) {
  if (tag == "s5" || tag == "s6") return gamma;
  return -gamma;
}

ReportFile build_report(const FleetFile& ff, const ConsensusResult& res,
                        const RendezvousReport* verification,
                        double solve_seconds, int workers) {
  ReportFile r;
  r.feasible = res.feasible;
  r.timing = {solve_seconds, workers};
  if (!res.feasible) {
    r.infeasibility_margin = infeasibility_margin_of(ff);
    return r;
  }
  r.t_star = res.t_star;
  r.x_star = res.x_star;
  for (int n = 0; n < 3; ++n) {
    const int pos = res.critical_triplet[n];
    r.critical_triplet[n] = pos > 0 ? ff.agents[pos - 1].id : 0;
  }
  for (size_t i = 0; i < res.per_agent.size(); ++i) {
    const SynthesizedControl& c = res.per_agent[i];
    ReportAgent a;
    a.id = ff.agents[i].id;
    a.sequence = sequence_tag_of(c.plan);
    a.gamma = c.plan.gamma;
    a.t1 = c.plan.t1;
    a.t2 = c.plan.t2;
    a.beta_eff = c.beta_eff;
    a.fuel_used = fuel_of(c.plan);
    if (verification && i < verification->agents.size()) {
      a.terminal_error = std::hypot(verification->agents[i].pos_error,
                                    verification->agents[i].vel_error);
    }
    r.per_agent.push_back(std::move(a));
  }
  return r;
}

int cmd_feasibility(const std::string& fleet_path, std::ostream& out,
                    std::ostream& err) {
  FleetFile ff;
  try {
    ff = load_fleet_file(fleet_path);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  const Fleet fleet = to_fleet(ff);
  const VelocityBand band = consensus_band(fleet.agents, fleet.beta);
  if (band.empty) {
    out << "infeasible: velocity spread exceeds 2*beta by "
        << fmt12(infeasibility_margin_of(ff)) << "\n";
    return kExitInfeasible;
  }
  out << "feasible: consensus velocity band [" << fmt12(band.v_lo) << ", "
      << fmt12(band.v_hi) << "]\n";
  return kExitOk;
}

int cmd_solve(const std::string& fleet_path, const SolveCmdOptions& opts,
              std::ostream& out, std::ostream& err) {
  FleetFile ff;
  try {
    ff = load_fleet_file(fleet_path);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (opts.workers < 1) {
    err << "input error: --workers must be >= 1\n";
    return kExitInputError;
  }
  const Fleet fleet = to_fleet(ff);

  const auto t0 = std::chrono::steady_clock::now();
  ConsensusResult res;
  try {
    res = solve_fleet_distributed(fleet, opts.workers, {opts.hull_prune});
  } catch (const PairInfeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const TripletInfeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::runtime_error& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kExitInconsistent;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  if (!res.feasible) {
    const ReportFile rep = build_report(ff, res, nullptr, secs, opts.workers);
    try {
      if (!opts.output_path.empty()) {
        write_file(opts.output_path, serialize_report(rep), "report");
      }
    } catch (const ParseError& e) {
      err << "input error: " << e.what() << "\n";
      return kExitInputError;
    }
    out << "infeasible: velocity spread exceeds 2*beta by "
        << fmt12(rep.infeasibility_margin) << "\n";
    return kExitInfeasible;
  }

  const RendezvousReport ver = verify_rendezvous(fleet, res);
  const ReportFile rep = build_report(ff, res, &ver, secs, opts.workers);
  const std::string text = serialize_report(rep);
  try {
    if (!opts.output_path.empty()) {
      write_file(opts.output_path, text, "report");
      out << "t_star: " << fmt12(rep.t_star) << "\n";
      out << "x_star: (" << fmt12(rep.x_star.pos) << ", "
          << fmt12(rep.x_star.vel) << ")\n";
      out << "critical triplet: " << rep.critical_triplet[0] << " "
          << rep.critical_triplet[1] << " " << rep.critical_triplet[2] << "\n";
      out << "verification: " << (ver.pass ? "pass" : "FAIL")
          << " (max position error " << fmt12(ver.max_pos_error)
          << ", max velocity error " << fmt12(ver.max_vel_error) << ")\n";
      out << "report written to " << opts.output_path << "\n";
    } else {
      out << text;
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (!ver.pass) {
    err << "inconsistency: rendezvous verification failed (max position error "
        << fmt12(ver.max_pos_error) << ", max velocity error "
        << fmt12(ver.max_vel_error) << ")\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

int cmd_boundary(const BoundaryCmdOptions& opts, std::ostream& out,
                 std::ostream& err) {
  if (!std::isfinite(opts.x) || !std::isfinite(opts.v) ||
      !std::isfinite(opts.beta) || !std::isfinite(opts.tf) ||
      opts.beta < 0.0 || opts.tf < 0.0 || opts.n < 8) {
    err << "input error: need finite x/v, beta >= 0, tf >= 0, n >= 8\n";
    return kExitInputError;
  }
  const std::vector<AgentState> poly =
      boundary_polyline({{opts.x, opts.v}, opts.beta, opts.tf}, opts.n);

  std::ostringstream csv;
  csv << "x,v\n";
  for (const AgentState& p : poly) {
    csv << fmt12(p.pos) << "," << fmt12(p.vel) << "\n";
  }
  const bool closed =
      poly.size() >= 2 && poly.front().pos == poly.back().pos &&
      poly.front().vel == poly.back().vel;
  if (!closed) {
    csv << fmt12(poly.front().pos) << "," << fmt12(poly.front().vel) << "\n";
  }

  try {
    if (!opts.output_path.empty()) {
      write_file(opts.output_path, csv.str(), "boundary CSV");
      out << "boundary written to " << opts.output_path << "\n";
    } else {
      out << csv.str();
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& fleet_path, const std::string& report_path,
                 int samples, const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
  FleetFile ff;
  ReportFile rep;
  try {
    ff = load_fleet_file(fleet_path);
    rep = load_report(report_path);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (samples < 2) {
    err << "input error: --samples must be >= 2\n";
    return kExitInputError;
  }
  if (!rep.feasible) {
    err << "input error: report is infeasible; nothing to simulate\n";
    return kExitInputError;
  }
  if (rep.per_agent.size() != ff.agents.size()) {
    err << "input error: report/fleet mismatch: " << rep.per_agent.size()
        << " report agents vs " << ff.agents.size() << " fleet agents\n";
    return kExitInputError;
  }
  for (size_t i = 0; i < ff.agents.size(); ++i) {
    if (rep.per_agent[i].id != ff.agents[i].id) {
      err << "input error: report/fleet mismatch at position " << i
          << ": id " << rep.per_agent[i].id << " vs " << ff.agents[i].id
          << "\n";
      return kExitInputError;
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  bool consistent = true;
  for (size_t i = 0; i < ff.agents.size(); ++i) {
    const ReportAgent& ra = rep.per_agent[i];
    const AgentState x0{ff.agents[i].x, ff.agents[i].v};
    const SwitchPlan plan{ra.gamma, ra.t1, ra.t2, rep.t_star,
                          tail_from_tag(ra.sequence, ra.gamma)};
    if (!plan_valid(plan)) {
      err << "input error: agent " << ra.id << ": invalid switch times\n";
      return kExitInputError;
    }
    const Trajectory traj = sample_trajectory(x0, plan, samples);

    std::ostringstream csv;
    csv << "t,x,v,u\n";
    for (const TrajectoryPoint& s : traj.samples) {
      csv << fmt12(s.t) << "," << fmt12(s.state.pos) << ","
          << fmt12(s.state.vel) << "," << fmt12(control_at(plan, s.t)) << "\n";
    }
    const std::string path =
        (std::filesystem::path(out_dir) / ("agent_" + std::to_string(ra.id) + ".csv"))
            .string();
    try {
      write_file(path, csv.str(), "trajectory CSV");
    } catch (const ParseError& e) {
      err << "input error: " << e.what() << "\n";
      return kExitInputError;
    }

    const AgentState end = traj.samples.back().state;
    const double tol_pos = 1e-4 + 1e-6 * std::abs(rep.x_star.pos);
    const double tol_vel = 1e-4 + 1e-6 * std::abs(rep.x_star.vel);
    if (std::abs(end.pos - rep.x_star.pos) > tol_pos ||
        std::abs(end.vel - rep.x_star.vel) > tol_vel) {
      err << "inconsistency: agent " << ra.id
          << " terminal state misses x_star by ("
          << fmt12(end.pos - rep.x_star.pos) << ", "
          << fmt12(end.vel - rep.x_star.vel) << ")\n";
      consistent = false;
    }
  }
  out << "wrote " << ff.agents.size() << " trajectory files to " << out_dir
      << "\n";
  return consistent ? kExitOk : kExitInconsistent;
}

int cmd_verify(const std::string& fleet_path, const std::string& report_path,
               std::ostream& out, std::ostream& err) {
  FleetFile ff;
  ReportFile rep;
  try {
    ff = load_fleet_file(fleet_path);
    rep = load_report(report_path);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  const Fleet fleet = to_fleet(ff);

  if (!rep.feasible) {
    if (feasible(fleet.agents, fleet.beta)) {
      err << "inconsistency: report says infeasible but the fleet satisfies "
             "the velocity-spread bound\n";
      return kExitInconsistent;
    }
    out << "verification: pass (fleet and report agree on infeasibility)\n";
    return kExitOk;
  }
  if (rep.per_agent.size() != ff.agents.size()) {
    err << "input error: report/fleet mismatch: " << rep.per_agent.size()
        << " report agents vs " << ff.agents.size() << " fleet agents\n";
    return kExitInputError;
  }

  bool pass = true;
  for (size_t i = 0; i < ff.agents.size(); ++i) {
    const ReportAgent& ra = rep.per_agent[i];
    if (ra.id != ff.agents[i].id) {
      err << "input error: report/fleet mismatch at position " << i << "\n";
      return kExitInputError;
    }
    const AgentState x0{ff.agents[i].x, ff.agents[i].v};
    const SwitchPlan plan{ra.gamma, ra.t1, ra.t2, rep.t_star,
                          tail_from_tag(ra.sequence, ra.gamma)};
    bool ok = plan_valid(plan);
    double dp = 0.0, dv = 0.0, fuel = 0.0;
    if (ok) {
      const AgentState end = apply_plan(x0, plan);
      dp = std::abs(end.pos - rep.x_star.pos);
      dv = std::abs(end.vel - rep.x_star.vel);
      fuel = fuel_of(plan);
      ok = dp <= 1e-4 + 1e-6 * std::abs(rep.x_star.pos) &&
           dv <= 1e-4 + 1e-6 * std::abs(rep.x_star.vel) &&
           fuel <= fleet.beta + 1e-6;
    }
    out << "agent " << ra.id << ": " << (ok ? "ok" : "FAIL")
        << " (pos error " << fmt12(dp) << ", vel error " << fmt12(dv)
        << ", fuel " << fmt12(fuel) << ")\n";
    pass = pass && ok;
  }
  out << "verification: " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitOk : kExitInconsistent;
}

}  // namespace fuelcon
