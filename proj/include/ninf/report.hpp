#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ninf/analysis.hpp"

namespace ninf {

enum class Check {
  concavity,
  envelope,
  cones,
  quadcone,
  semiconcavity,
  gradient,
  blowup,
  decay,
  comparison,
  singularity,
};

const std::vector<Check>& all_checks();
std::string_view check_name(Check check);
std::optional<Check> parse_check(std::string_view name);

struct Verdict {
  Check check;
  double value;
  double tolerance;
  bool pass;
  std::string note;
};

struct SemiconcavityEntry {
  std::string K_set;
  double M;
  double C;
  double violation;
};

/// Defects and fitted constants of one verification run. Sequences run over
/// refinements, coarsest first; scalar entries refer to the finest field.
struct RegularityReport {
  std::string domain;
  std::vector<double> h;
  std::vector<double> concavity_defect;
  std::optional<double> envelope_defect;
  std::optional<std::size_t> envelope_touching;
  std::optional<double> cone_monotonicity_violation;
  std::optional<double> cone_endpoint_violation;
  std::vector<double> quad_cone_violation;
  std::optional<SemiconcavityEntry> semiconcavity;
  std::vector<double> gradient_osc;
  std::optional<double> boundary_blowup;
  std::vector<DecayPoint> decay;
  std::optional<long> comparison_violations;
  std::optional<double> singularity_violation;
  std::optional<double> singularity_control;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

struct ReportInput {
  ConvexDomain domain;
  std::vector<ScalarField> fields;  // nested refinements, coarsest first
  double f = 1.0;                   // constant source the fields were solved with
  SchemeParams params;              // scheme of the finest field, for checks that solve again
  double shrink = 0.5;              // K = domain scaled about its centroid
};

/// Runs the selected checks in order.
RegularityReport run_checks(const ReportInput& input, const std::vector<Check>& checks);

/// "key: value" blocks, one per check, preceded by a header block.
void write_report(std::ostream& out, const RegularityReport& report);

/// Log-log plot of the per-refinement defect sequences against h.
void write_svg(std::ostream& out, const RegularityReport& report);

}  // namespace ninf
