#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ninf/game.hpp"
#include "ninf/report.hpp"
#include "ninf/solver.hpp"

namespace ninf {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numeric = 2, exit_verification = 3 };

struct RunConfig {
  std::string config_path;
  std::string domain_path;
  double f = 1.0;
  SchemeParams scheme;
  GameConfig game;
  std::vector<double> start;  // empty selects the centroid
  std::string guide_path;
  bool allow_nonexit = false;
  std::vector<Check> checks;
  int refinements = 3;
  double shrink = 0.5;
  std::string field_path;     // verify/report/envelope on a stored field instead of solving
  std::string out_dir = ".";
  std::string output_path;    // solve: field file, report: report file
  std::string svg_path;
};

/// Entry point of the ninf command line: solve, envelope, tow, verify <check>, report.
/// Returns one of ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ninf
