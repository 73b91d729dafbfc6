#include "ninf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace ninf {

SourceTerm SourceTerm::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("source term must be finite");
  SourceTerm f;
  f.constant_ = c;
  return f;
}

SourceTerm SourceTerm::sampled(ScalarField values) {
  SourceTerm f;
  f.field_ = std::make_shared<const ScalarField>(std::move(values));
  return f;
}

double SourceTerm::min_inside(const Grid& grid) const {
  if (is_constant()) return constant_;
  double m = (*field_)[grid.inside_nodes().front()];
  for (int node : grid.inside_nodes()) m = std::min(m, (*field_)[node]);
  return m;
}

NoConvergence::NoConvergence(int iterations, double residual)
    : std::runtime_error("no convergence after " + std::to_string(iterations) +
                         " sweeps; final update residual " + std::to_string(residual)),
      iterations_(iterations),
      residual_(residual) {}

double dpp_update(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f, int node) {
  const auto [hi, lo] = ring_extrema(field, stencil, node);
  const double eps = stencil.eps();
  return 0.5 * (hi + lo) + 0.5 * eps * eps * f.at(node);
}

ScalarField solve(const RingStencil& stencil, const SourceTerm& f, const SchemeParams& params,
                  const SweepObserver& observer) {
  const Grid& grid = stencil.grid();
  if (params.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!f.is_constant() && f.min_inside(grid) < 0.0 && !params.allow_mixed_sign) {
    throw std::invalid_argument("source term takes negative values; pass allow_mixed_sign to accept");
  }
  if (f.is_constant() && f.constant_value() < 0.0 && !params.allow_mixed_sign) {
    throw std::invalid_argument("negative constant source term; pass allow_mixed_sign to accept");
  }
  const double tol = params.tolerance(grid.domain());
  const auto& nodes = grid.inside_nodes();
  ScalarField u(stencil.grid_ptr(), 0.0, true);
  double diff = 0.0;

  if (params.sweep == Sweep::jacobi) {
    ScalarField next = u;
    std::vector<double> worker_diff(static_cast<std::size_t>(std::max(params.threads, 1)), 0.0);
    for (int it = 1; it <= params.max_iter; ++it) {
      std::fill(worker_diff.begin(), worker_diff.end(), 0.0);
      detail::parallel_chunks(nodes.size(), params.threads, [&](std::size_t b, std::size_t e, int w) {
        double d = 0.0;
        for (std::size_t k = b; k < e; ++k) {
          const int node = nodes[k];
          const double v = dpp_update(u, stencil, f, node);
          d = std::max(d, std::abs(v - u[node]));
          next[node] = v;
        }
        worker_diff[static_cast<std::size_t>(w)] = d;
      });
      std::swap(u, next);
      diff = *std::max_element(worker_diff.begin(), worker_diff.end());
      if (observer) observer(it, diff);
      if (diff <= tol) return u;
    }
    throw NoConvergence(params.max_iter, diff);
  }

  // Gauss-Seidel, alternating lexicographic and reverse order.
  for (int it = 1; it <= params.max_iter; ++it) {
    diff = 0.0;
    const bool forward = (it % 2) == 1;
    const std::size_t n = nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
      const int node = nodes[forward ? k : n - 1 - k];
      const double v = dpp_update(u, stencil, f, node);
      diff = std::max(diff, std::abs(v - u[node]));
      u[node] = v;
    }
    if (observer) observer(it, diff);
    if (diff <= tol) return u;
  }
  throw NoConvergence(params.max_iter, diff);
}

ScalarField solve(const ConvexDomain& domain, const SourceTerm& f, const SchemeParams& params,
                  const SweepObserver& observer) {
  auto grid = build_grid(domain, params.spacing(domain.dimension()));
  const int m = domain.dimension() == 1 ? 2 : params.m;
  const RingStencil stencil = build_ring(grid, params.eps, m);
  return solve(stencil, f, params, observer);
}

ScalarField residual(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f) {
  ScalarField out(field.grid_ptr(), 0.0, false);
  for (int node : field.grid().inside_nodes()) out[node] = std::abs(dpp_update(field, stencil, f, node) - field[node]);
  return out;
}

double sup_residual(const ScalarField& field, const RingStencil& stencil, const SourceTerm& f) {
  return residual(field, stencil, f).sup_inside();
}

ScalarField one_dim_family(std::shared_ptr<const Grid> grid, double r, double R) {
  if (!(R > 0.0) || !(r >= 0.0) || !(r <= R)) throw std::invalid_argument("one_dim_family needs 0 <= r <= R");
  if (grid->dimension() != 1) throw std::invalid_argument("one_dim_family lives on an interval grid");
  return ScalarField::sample(
      std::move(grid),
      [r, R](const Point& x) {
        const double a = std::abs(x.x());
        if (a >= R) return 0.0;
        return a <= r ? 0.5 * (R * R - r * r) : 0.5 * (R * R - a * a);
      },
      true);
}

}  // namespace ninf
