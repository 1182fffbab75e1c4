#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fuelcon/fleet.hpp"
#include "fuelcon/synthesis.hpp"

namespace fuelcon {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInconsistent = 3;

struct FleetFileAgent {
  int id = 0;
  double x = 0.0;
  double v = 0.0;
};

struct FleetFile {
  std::string schema_version = "1";
  double beta = 0.0;
  std::vector<FleetFileAgent> agents;  // file order defines solver order
};

FleetFile parse_fleet_file(const std::string& text);  // throws ParseError
std::string serialize_fleet_file(const FleetFile& f);
FleetFile load_fleet_file(const std::string& path);   // throws ParseError
Fleet to_fleet(const FleetFile& f);

struct ReportAgent {
  int id = 0;
  std::string sequence;  // s1..s4 or "off"
  int gamma = 1;
  double t1 = 0.0;
  double t2 = 0.0;
  double beta_eff = 0.0;
  double fuel_used = 0.0;
  double terminal_error = 0.0;
};

struct ReportTiming {
  double solve_seconds = 0.0;
  int workers = 1;
};

struct ReportFile {
  std::string schema_version = "1";
  bool feasible = false;
  double infeasibility_margin = 0.0;  // only meaningful when infeasible
  double t_star = 0.0;
  AgentState x_star;
  std::array<int, 3> critical_triplet{0, 0, 0};  // file ids, 0-padded
  std::vector<ReportAgent> per_agent;
  ReportTiming timing;
};

ReportFile parse_report(const std::string& text);  // throws ParseError
std::string serialize_report(const ReportFile& r);
ReportFile load_report(const std::string& path);   // throws ParseError

// Classification of a plan's realized input shape for reporting.
std::string sequence_tag_of(const SwitchPlan& p);

ReportFile build_report(const FleetFile& ff, const ConsensusResult& res,
                        const RendezvousReport* verification,
                        double solve_seconds, int workers);

// 12-significant-digit, locale-independent number formatting for console
// and CSV output (report JSON keeps full round-trip precision).
std::string fmt12(double value);

struct SolveCmdOptions {
  bool hull_prune = false;
  int workers = 1;
  std::string output_path;  // empty: report JSON goes to stdout
};

struct BoundaryCmdOptions {
  double x = 0.0;
  double v = 0.0;
  double beta = 0.0;
  double tf = 0.0;
  int n = 256;
  std::string output_path;  // empty: CSV goes to stdout
};

int cmd_feasibility(const std::string& fleet_path, std::ostream& out,
                    std::ostream& err);
int cmd_solve(const std::string& fleet_path, const SolveCmdOptions& opts,
              std::ostream& out, std::ostream& err);
int cmd_boundary(const BoundaryCmdOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_simulate(const std::string& fleet_path, const std::string& report_path,
                 int samples, const std::string& out_dir, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const std::string& fleet_path, const std::string& report_path,
               std::ostream& out, std::ostream& err);

}  // namespace fuelcon
