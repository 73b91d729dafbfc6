#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <variant>

#include "ninf/discretization.hpp"

namespace ninf {

enum class Sweep { jacobi, gauss_seidel };

struct SchemeParams {
  double eps = 0.05;       // ring radius
  int m = 16;              // ring directions in 2D; 1D always uses 2
  double tol = 0.0;        // sup-norm update tolerance; 0 selects 1e-9 * diam^2
  int max_iter = 1000000;
  Sweep sweep = Sweep::gauss_seidel;
  double h = 0.0;          // lattice spacing; 0 selects eps / 2.5 in 2D, eps / 2 in 1D
  int threads = 1;         // Jacobi workers
  bool allow_mixed_sign = false;

  double spacing(int dimension) const { return h > 0.0 ? h : eps / (dimension == 1 ? 2.0 : 2.5); }
  double tolerance(const ConvexDomain& d) const { return tol > 0.0 ? tol : 1e-9 * d.diameter() * d.diameter(); }
};

/// Right-hand side f of -Delta_inf^N u = f: a constant or per-node samples.
class SourceTerm {
 public:
  static SourceTerm constant(double c);
  static SourceTerm sampled(ScalarField values);

  double at(int node) const { return is_constant() ? constant_ : (*field_)[node]; }
  double at(const Point& x) const { return is_constant() ? constant_ : field_->interpolate(x); }
  bool is_constant() const { return !field_; }
  double constant_value() const { return constant_; }
  double min_inside(const Grid& grid) const;

 private:
  double constant_ = 0.0;
  std::shared_ptr<const ScalarField> field_;
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(int iterations, double residual);
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Called after every sweep with (iteration, sup-norm update difference).
using SweepObserver = std::function<void(int, double)>;

/// 1/2 (max + min over the ring) + eps^2/2 f(node).
double dpp_update(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f, int node);

/// Fixed-point iteration of dpp_update from the zero field until successive
/// iterates differ by at most the tolerance in sup norm.
/// Throws NoConvergence when max_iter sweeps do not reach it.
ScalarField solve(const RingStencil& stencil, const SourceTerm& f, const SchemeParams& params,
                  const SweepObserver& observer = {});

/// Builds the grid (spacing params.spacing()) and ring, then solves.
ScalarField solve(const ConvexDomain& domain, const SourceTerm& f, const SchemeParams& params,
                  const SweepObserver& observer = {});

/// Per-node |dpp_update - value| on inside nodes, zero elsewhere.
ScalarField residual(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f);
double sup_residual(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f);

/// u_r(x) = (R^2 - r^2)/2 for |x| <= r and (R^2 - x^2)/2 for r <= |x| <= R,
/// sampled on a grid of (-R, R).
ScalarField one_dim_family(std::shared_ptr<const Grid> grid, double r, double R);

}  // namespace ninf
