#include "ninf/analysis.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ninf {
namespace {

// Lattice steps whose multiples define the sampled segments.
std::vector<std::array<int, 2>> segment_steps(int dimension) {
  if (dimension == 1) return {{1, 0}};
  return {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
}

int node_at(const Grid& g, int ix, int iy) {
  if (ix < 0 || iy < 0 || ix >= g.nx() || iy >= g.ny()) return -1;
  return g.index(ix, iy);
}

std::vector<int> nodes_in_shrunk(const Grid& g, double shrink) {
  if (!(shrink > 0.0) || !(shrink < 1.0)) throw std::invalid_argument("shrink factor must lie in (0, 1)");
  const ConvexDomain K = g.domain().scaled(shrink, g.domain().centroid());
  std::vector<int> out;
  for (int node : g.inside_nodes())
    if (K.contains(g.position(node))) out.push_back(node);
  return out;
}

}  // namespace

double geometric_tolerance(const ScalarField& u) {
  const double diam = u.grid().domain().diameter();
  return 10.0 * u.grid().h() * u.sup_inside() / (diam * diam);
}

double concavity_defect(const ScalarField& u, double exponent) {
  if (!(exponent > 0.0) || !(exponent <= 1.0)) throw std::invalid_argument("concavity exponent must lie in (0, 1]");
  const Grid& g = u.grid();
  std::vector<double> uq(g.size(), 0.0);
  for (int node : g.inside_nodes()) {
    if (u[node] < 0.0) throw std::invalid_argument("concavity_defect needs u >= 0");
    uq[static_cast<std::size_t>(node)] = exponent == 1.0 ? u[node] : std::pow(u[node], exponent);
  }
  double defect = 0.0;
  for (int node : g.inside_nodes()) {
    const int ix = g.ix(node);
    const int iy = g.iy(node);
    for (const auto& s : segment_steps(g.dimension())) {
      for (int j = 1;; ++j) {
        const int far = node_at(g, ix + 2 * j * s[0], iy + 2 * j * s[1]);
        if (far < 0 || !g.inside(far)) break;
        const int mid = g.index(ix + j * s[0], iy + j * s[1]);
        const double gap = 0.5 * (uq[static_cast<std::size_t>(node)] + uq[static_cast<std::size_t>(far)]) -
                           uq[static_cast<std::size_t>(mid)];
        defect = std::max(defect, gap);
      }
    }
  }
  return defect;
}

ConeComparison cone_comparison(const ScalarField& u, int base_node, std::vector<double> radii, int samples) {
  const Grid& g = u.grid();
  if (!g.inside(base_node)) throw std::invalid_argument("cone base must be an inside node");
  if (radii.empty()) throw std::invalid_argument("cone comparison needs at least one radius");
  std::sort(radii.begin(), radii.end());
  const double R = g.boundary_dist(base_node);
  if (!(radii.front() > 0.0) || radii.back() > R * (1.0 + 1e-12)) {
    throw std::invalid_argument("cone radii must lie in (0, " + std::to_string(R) + "]");
  }
  const Point y = g.position(base_node);
  const double uy = u[base_node];
  const std::vector<Eigen::Vector2d> dirs = ring_directions(g.dimension() == 1 ? 2 : samples);

  ConeComparison out;
  out.radii = radii;
  for (double r : radii) {
    double slope = -std::numeric_limits<double>::infinity();
    for (const auto& v : dirs) slope = std::max(slope, (uy - u.interpolate(Point(y + r * v))) / r);
    out.slopes.push_back(slope);
    out.endpoint_violation = std::max(out.endpoint_violation, slope - uy / R);
  }
  for (std::size_t i = 0; i + 1 < out.slopes.size(); ++i) {
    out.monotonicity_violation = std::max(out.monotonicity_violation, out.slopes[i] - out.slopes[i + 1]);
  }
  return out;
}

double quad_cone_bound(const ScalarField& u, int boundary_samples) {
  const Grid& g = u.grid();
  const double diam = g.domain().diameter();
  const std::vector<Point> zs = g.domain().boundary_samples(boundary_samples);
  double violation = 0.0;
  for (int node : g.inside_nodes()) {
    const Point x = g.position(node);
    for (const auto& z : zs) {
      const double d = (x - z).norm();
      violation = std::max(violation, u[node] - (0.5 * diam * d - 0.5 * d * d));
    }
  }
  return violation;
}

std::vector<DecayPoint> boundary_decay(const ConvexDomain& domain, const std::vector<double>& margins,
                                       const SchemeParams& params, int boundary_samples) {
  const double diam = domain.diameter();
  const std::vector<Point> zs = domain.boundary_samples(boundary_samples);
  std::vector<DecayPoint> out;
  for (double eps : margins) {
    const ConvexDomain outer = domain.outer_parallel_body(eps);
    const ScalarField u = solve(outer, SourceTerm::constant(1.0), params);
    double sup = 0.0;
    for (const auto& z : zs) sup = std::max(sup, u.interpolate(z));
    out.push_back({eps, sup, 0.5 * eps * (diam + 1.0) - 0.5 * eps * eps});
  }
  return out;
}

double semiconcavity_violation(const ScalarField& u, double shrink, double C) {
  const Grid& g = u.grid();
  const std::vector<int> K = nodes_in_shrunk(g, shrink);
  const double h = g.h();
  double violation = 0.0;
  for (std::size_t a = 0; a < K.size(); ++a) {
    const int x = K[a];
    for (std::size_t b = a + 1; b < K.size(); ++b) {
      const int y = K[b];
      const int dx = g.ix(y) - g.ix(x);
      const int dy = g.iy(y) - g.iy(x);
      if ((dx % 2) != 0 || (dy % 2) != 0) continue;
      const int mid = g.index(g.ix(x) + dx / 2, g.iy(x) + dy / 2);
      const double dist2 = h * h * (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
      violation = std::max(violation, 0.5 * (u[x] + u[y]) - C / 8.0 * dist2 - u[mid]);
    }
  }
  return violation;
}

Semiconcavity semiconcavity_check(const ScalarField& u, double shrink) {
  const Grid& g = u.grid();
  const std::vector<int> K = nodes_in_shrunk(g, shrink);
  Semiconcavity out;
  out.nodes_in_K = K.size();
  std::vector<double> root(K.size());
  for (std::size_t a = 0; a < K.size(); ++a) {
    if (u[K[a]] < 0.0) throw std::invalid_argument("semiconcavity_check needs u >= 0");
    root[a] = std::sqrt(u[K[a]]);
  }
  for (std::size_t a = 0; a < K.size(); ++a) {
    const Point xa = g.position(K[a]);
    for (std::size_t b = a + 1; b < K.size(); ++b) {
      out.M = std::max(out.M, std::abs(root[a] - root[b]) / (xa - g.position(K[b])).norm());
    }
  }
  out.C = 2.0 * out.M * out.M;
  out.violation = semiconcavity_violation(u, shrink, out.C);
  return out;
}

namespace {

template <class Bound>
double max_excess(const ScalarField& u, const SingularityProbe& probe, double radius, Bound&& bound) {
  const Grid& g = u.grid();
  const double u0 = u.interpolate(probe.x0);
  double violation = 0.0;
  for (int node : g.inside_nodes()) {
    const Eigen::Vector2d d = g.position(node) - probe.x0;
    if (d.norm() > radius) continue;
    violation = std::max(violation, u[node] - (u0 + probe.p.dot(d) + bound(d)));
  }
  return violation;
}

void validate(const Grid& g, const SingularityProbe& probe) {
  if (std::abs(probe.zeta.norm() - 1.0) > 1e-12) throw std::invalid_argument("zeta must be a unit vector");
  if (!(probe.R > 0.0)) throw std::invalid_argument("R must be positive");
  if (g.domain().signed_distance(probe.x0) > -probe.R * (1.0 - 1e-12)) {
    throw std::invalid_argument("closed ball B_R(x0) must lie inside the domain");
  }
}

}  // namespace

double singularity_estimate_check(const ScalarField& u, const SingularityProbe& probe) {
  validate(u.grid(), probe);
  return max_excess(u, probe, probe.R, [&](const Eigen::Vector2d& d) {
    return -probe.K * std::abs(probe.zeta.dot(d)) + 0.5 * probe.C * d.squaredNorm();
  });
}

double singularity_quadratic_check(const ScalarField& u, const SingularityProbe& probe, double c) {
  validate(u.grid(), probe);
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double delta = std::min(probe.K / c, probe.R);
  return max_excess(u, probe, delta, [&](const Eigen::Vector2d& d) {
    const double s = probe.zeta.dot(d);
    return -c * s * s + 0.5 * probe.C * d.squaredNorm();
  });
}

std::vector<double> gradient_oscillation(const std::vector<ScalarField>& fields, double shrink) {
  if (fields.empty()) throw std::invalid_argument("gradient_oscillation needs at least one field");
  for (std::size_t k = 1; k < fields.size(); ++k) {
    const GridSpec& a = fields[k - 1].grid().spec();
    const GridSpec& b = fields[k].grid().spec();
    const double scale = std::max(1.0, a.origin.cwiseAbs().maxCoeff());
    if ((a.origin - b.origin).cwiseAbs().maxCoeff() > 1e-12 * scale || std::abs(a.h - 2.0 * b.h) > 1e-12 * a.h) {
      throw std::invalid_argument("gradient_oscillation needs nested grids (same origin, spacing halving)");
    }
  }
  std::vector<double> out;
  for (const auto& u : fields) {
    const Grid& g = u.grid();
    double spread = 0.0;
    for (int node : nodes_in_shrunk(g, shrink)) {
      const int ix = g.ix(node);
      const int iy = g.iy(node);
      for (int axis = 0; axis < g.dimension(); ++axis) {
        const int sx = axis == 0 ? 1 : 0;
        const int sy = axis == 1 ? 1 : 0;
        const int fwd = node_at(g, ix + sx, iy + sy);
        const int bwd = node_at(g, ix - sx, iy - sy);
        if (fwd < 0 || bwd < 0 || !g.inside(fwd) || !g.inside(bwd)) continue;
        const double gap = ((u[fwd] - u[node]) - (u[node] - u[bwd])) / g.h();
        spread = std::max(spread, std::abs(gap));
      }
    }
    out.push_back(spread);
  }
  return out;
}

BlowupFit boundary_blowup(const TransformedField& tf, const Point& x1, const Eigen::Vector2d& inward_normal) {
  const ScalarField& w = tf.w;
  const Grid& g = w.grid();
  const Eigen::Vector2d nu = inward_normal.normalized();
  const ConvexDomain& d = g.domain();
  if (std::abs(d.signed_distance(x1)) > 1e-9 * g.h()) throw std::invalid_argument("x1 must lie on the boundary");
  const Point start = x1 + 1e-9 * g.h() * nu;
  const auto chord = d.ray_exit(start, nu, 2.0 * d.diameter());
  if (!chord) throw std::invalid_argument("inward normal does not cross the domain");
  const double top = std::exp2(std::floor(std::log2(0.5 * *chord)));
  const double w1 = d.signed_distance(x1) >= 0.0 && w.dirichlet_zero() ? 0.0 : w.interpolate(x1);

  BlowupFit fit{0.0, {}, {}};
  for (double t = top; t >= 2.0 * g.h() * (1.0 - 1e-12); t *= 0.5) {
    fit.offsets.push_back(t);
    fit.gaps.push_back(std::abs(w.interpolate(Point(x1 + t * nu)) - w1));
  }
  if (fit.offsets.size() < 4) {
    throw std::invalid_argument("boundary_blowup resolves only " + std::to_string(fit.offsets.size()) +
                                " dyadic levels; need 4");
  }
  const auto n = static_cast<Eigen::Index>(fit.offsets.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gap = fit.gaps[static_cast<std::size_t>(i)];
    if (!(gap > 0.0)) throw std::invalid_argument("boundary_blowup: w is flat along the normal");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(fit.offsets[static_cast<std::size_t>(i)]);
    rhs[i] = std::log(gap);
  }
  fit.exponent = design.colPivHouseholderQr().solve(rhs)[1];
  return fit;
}

}  // namespace ninf
