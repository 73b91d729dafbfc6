#pragma once

#include <vector>

#include "ninf/discretization.hpp"
#include "ninf/envelope.hpp"
#include "ninf/solver.hpp"

namespace ninf {

/// Largest midpoint-concavity defect of u^q,
///   max(0, (u^q(x) + u^q(y))/2 - u^q((x+y)/2)),
/// over inside-node pairs along axis and diagonal lattice directions whose
/// midpoint is a node.
double concavity_defect(const ScalarField& u, double exponent);

struct ConeComparison {
  std::vector<double> radii;
  std::vector<double> slopes;         // g(r) = max over |x-y| = r of (u(y) - u(x)) / r
  double monotonicity_violation = 0;  // largest drop of g between consecutive radii
  double endpoint_violation = 0;      // largest excess of g(r) over u(y)/R, R = dist(y, boundary)
  double violation() const { return std::max(monotonicity_violation, endpoint_violation); }
};

/// Comparison with cones from above for -u around an inside node. Circles are
/// sampled at `samples` points by interpolation. Rejects radii beyond the
/// node's boundary distance.
ConeComparison cone_comparison(const ScalarField& u, int base_node, std::vector<double> radii, int samples = 128);

/// max over boundary samples z and inside nodes x of
///   max(0, u(x) - (diam/2 |x - z| - |x - z|^2 / 2)).
double quad_cone_bound(const ScalarField& u, int boundary_samples = 256);

struct DecayPoint {
  double margin;  // width of the outer parallel body
  double sup;     // largest value on the original boundary
  double bound;   // margin/2 (diam + 1) - margin^2/2
};

/// Solves f = 1 on each outer parallel body of `domain` and records the
/// solution's supremum over the original boundary.
std::vector<DecayPoint> boundary_decay(const ConvexDomain& domain, const std::vector<double>& margins,
                                       const SchemeParams& params, int boundary_samples = 256);

struct Semiconcavity {
  double M = 0;          // Lipschitz constant of sqrt(u) over node pairs in K
  double C = 0;          // 2 M^2
  double violation = 0;
  std::size_t nodes_in_K = 0;
};

/// Semiconcavity with constant C over K = domain shrunk about its centroid:
/// max over node pairs x, y in K with lattice midpoint of
///   max(0, (u(x) + u(y))/2 - C/8 |x - y|^2 - u((x+y)/2)).
double semiconcavity_violation(const ScalarField& u, double shrink, double C);

/// Measures M on K, sets C = 2 M^2 and evaluates the violation with it.
Semiconcavity semiconcavity_check(const ScalarField& u, double shrink);

struct SingularityProbe {
  Point x0;
  Eigen::Vector2d p;
  Eigen::Vector2d zeta;  // unit
  double K;
  double C;
  double R;
};

/// max over inside nodes in B_R(x0) of
///   max(0, u(x) - [u(x0) + <p, x-x0> - K |<zeta, x-x0>| + C/2 |x-x0|^2]).
double singularity_estimate_check(const ScalarField& u, const SingularityProbe& probe);

/// Quadratic form of the estimate on B_delta(x0), delta = min(K/c, R):
///   u(x) <= u(x0) + <p, x-x0> - c <zeta, x-x0>^2 + C/2 |x-x0|^2.
double singularity_quadratic_check(const ScalarField& u, const SingularityProbe& probe, double c);

/// Per field: max over nodes of K (domain shrunk by `shrink`) and axes of
/// |D+ u - D- u|, the gap between forward and backward difference quotients.
/// Fields must live on nested lattices (same origin, spacing halving).
std::vector<double> gradient_oscillation(const std::vector<ScalarField>& fields, double shrink);

struct BlowupFit {
  double exponent;
  std::vector<double> offsets;  // t
  std::vector<double> gaps;     // |w(x1 + t nu) - w(x1)|
};

/// Log-log slope of |w(x1 + t nu) - w(x1)| against t over dyadic t in
/// [2h, half the chord along nu]. Needs at least 4 levels.
BlowupFit boundary_blowup(const TransformedField& w, const Point& x1, const Eigen::Vector2d& inward_normal);

/// 10 h ||u||_inf / diam^2: the pass threshold of the geometric checks.
double geometric_tolerance(const ScalarField& u);

}  // namespace ninf
