#include "ninf/envelope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <Eigen/Dense>

namespace ninf {

NegativeInput::NegativeInput(std::vector<int> nodes)
    : std::invalid_argument("transform needs u >= 0; negative at " + std::to_string(nodes.size()) + " node(s)"),
      nodes_(std::move(nodes)) {}

TransformedField transform(const ScalarField& u) {
  std::vector<int> bad;
  for (std::size_t k = 0; k < u.values().size(); ++k)
    if (u.values()[k] < 0.0) bad.push_back(static_cast<int>(k));
  if (!bad.empty()) throw NegativeInput(std::move(bad));
  std::vector<double> w(u.values().size());
  std::transform(u.values().begin(), u.values().end(), w.begin(), [](double v) { return v == 0.0 ? 0.0 : -std::sqrt(v); });
  return {ScalarField(u.grid_ptr(), std::move(w), u.dirichlet_zero()), u};
}

ScalarField inverse_transform(const ScalarField& w) {
  std::vector<double> u(w.values().size());
  std::transform(w.values().begin(), w.values().end(), u.begin(), [](double v) { return v * v; });
  return ScalarField(w.grid_ptr(), std::move(u), w.dirichlet_zero());
}

namespace {

// Lower hull by linear programming: for a target x,
//   minimize sum c_j lambda_j  s.t.  sum lambda_j (1, x_j) = (1, x),  lambda >= 0.
// A basic optimal solution has at most Rows = dim + 1 nonzero weights.
template <int Rows>
class LowerHullLP {
 public:
  using Mat = Eigen::Matrix<double, Rows, Rows>;
  using Vec = Eigen::Matrix<double, Rows, 1>;

  LowerHullLP(const Grid& grid, const ScalarField& w) : grid_(grid) {
    nodes_ = grid.closure_nodes();
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    xs_.resize(n);
    ys_.resize(n);
    cs_.resize(n);
    cloud_index_.assign(grid.size(), -1);
    for (Eigen::Index j = 0; j < n; ++j) {
      const int node = nodes_[static_cast<std::size_t>(j)];
      xs_[j] = grid.ix(node);
      ys_[j] = grid.iy(node);
      cs_[j] = w[node];
      cloud_index_[static_cast<std::size_t>(node)] = static_cast<int>(j);
    }
    const double scale = std::max(1.0, cs_.abs().maxCoeff());
    tol_ = 1e-12 * scale;
  }

  struct Solution {
    double value;
    std::vector<WitnessPoint> points;
  };

  Solution solve(int target) const {
    const int t = cloud_index_[static_cast<std::size_t>(target)];
    std::array<int, Rows> basis = initial_basis(target, t);
    const Vec rhs = column(t);
    Mat M;
    Vec lambda;
    auto refresh = [&] {
      for (int i = 0; i < Rows; ++i) M.col(i) = column(basis[static_cast<std::size_t>(i)]);
      lambda = M.partialPivLu().solve(rhs);
    };
    refresh();

    const Eigen::Index n = cs_.size();
    Eigen::ArrayXd reduced(n);
    int degenerate_run = 0;
    const int max_pivots = static_cast<int>(10 * n + 100);
    for (int pivot = 0; pivot < max_pivots; ++pivot) {
      Vec cb;
      for (int i = 0; i < Rows; ++i) cb[i] = cs_[basis[static_cast<std::size_t>(i)]];
      const Vec y = M.transpose().partialPivLu().solve(cb);
      reduced = cs_ - y[0] - y[1] * xs_;
      if constexpr (Rows == 3) reduced -= y[2] * ys_;

      Eigen::Index enter = -1;
      if (degenerate_run < 20) {
        const double best = reduced.minCoeff(&enter);
        if (best >= -tol_) break;
      } else {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (reduced[j] < -tol_) {
            enter = j;
            break;
          }
        }
        if (enter < 0) break;
      }

      const Vec d = M.partialPivLu().solve(column(static_cast<int>(enter)));
      int leave = -1;
      double step = 0.0;
      for (int i = 0; i < Rows; ++i) {
        if (d[i] <= 1e-12) continue;
        const double ratio = std::max(lambda[i], 0.0) / d[i];
        if (leave < 0 || ratio < step - 1e-15 ||
            (ratio <= step + 1e-15 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          step = ratio;
        }
      }
      if (leave < 0) break;  // cannot happen for a bounded cloud
      degenerate_run = step <= 1e-15 ? degenerate_run + 1 : 0;
      basis[static_cast<std::size_t>(leave)] = static_cast<int>(enter);
      refresh();
    }

    Solution sol{0.0, {}};
    for (int i = 0; i < Rows; ++i) sol.value += lambda[i] * cs_[basis[static_cast<std::size_t>(i)]];
    if (cs_[t] - sol.value <= tol_) {
      sol.value = cs_[t];
      sol.points.push_back({target, 1.0});
      return sol;
    }
    double total = 0.0;
    for (int i = 0; i < Rows; ++i) {
      if (lambda[i] > 1e-14) {
        sol.points.push_back({nodes_[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])], lambda[i]});
        total += lambda[i];
      }
    }
    for (auto& p : sol.points) p.lambda /= total;
    std::sort(sol.points.begin(), sol.points.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    return sol;
  }

 private:
  Vec column(int j) const {
    Vec v;
    v[0] = 1.0;
    v[1] = xs_[j];
    if constexpr (Rows == 3) v[2] = ys_[j];
    return v;
  }

  int cloud_at(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= grid_.nx() || iy >= grid_.ny()) return -1;
    return cloud_index_[static_cast<std::size_t>(grid_.index(ix, iy))];
  }

  std::array<int, Rows> initial_basis(int target, int t) const {
    const int ix = grid_.ix(target);
    const int iy = grid_.iy(target);
    const int a = cloud_at(ix + 1, iy) >= 0 ? cloud_at(ix + 1, iy) : cloud_at(ix - 1, iy);
    if constexpr (Rows == 2) {
      return {t, a};
    } else {
      const int b = cloud_at(ix, iy + 1) >= 0 ? cloud_at(ix, iy + 1) : cloud_at(ix, iy - 1);
      if (a >= 0 && b >= 0) return {t, a, b};
      // corner of the lattice cloud: widest triangle through t
      Eigen::Index far = 0;
      ((xs_ - xs_[t]).square() + (ys_ - ys_[t]).square()).maxCoeff(&far);
      Eigen::Index third = 0;
      ((xs_ - xs_[t]) * (ys_[far] - ys_[t]) - (ys_ - ys_[t]) * (xs_[far] - xs_[t])).abs().maxCoeff(&third);
      return {t, static_cast<int>(far), static_cast<int>(third)};
    }
  }

  const Grid& grid_;
  std::vector<int> nodes_;
  std::vector<int> cloud_index_;
  Eigen::ArrayXd xs_;
  Eigen::ArrayXd ys_;
  Eigen::ArrayXd cs_;
  double tol_ = 0.0;
};

template <int Rows>
Envelope envelope_impl(const ScalarField& w, double contact_tol) {
  const Grid& grid = w.grid();
  LowerHullLP<Rows> lp(grid, w);
  Envelope env{w, {}};
  env.witness.nodes.reserve(grid.inside_nodes().size());
  for (int node : grid.inside_nodes()) {
    auto sol = lp.solve(node);
    env.values[node] = std::min(sol.value, w[node]);
    if (w[node] - env.values[node] <= contact_tol) sol.points = {{node, 1.0}};
    env.witness.nodes.push_back({node, std::move(sol.points)});
  }
  return env;
}

}  // namespace

Envelope convex_envelope(const ScalarField& w, double contact_tol) {
  return w.grid().dimension() == 1 ? envelope_impl<2>(w, contact_tol) : envelope_impl<3>(w, contact_tol);
}

InteriorityReport witness_interiority(const EnvelopeWitness& witness, const Grid& grid) {
  InteriorityReport report;
  report.interior.reserve(witness.nodes.size());
  for (const auto& nw : witness.nodes) {
    bool ok = true;
    for (const auto& p : nw.points) {
      if (p.node == nw.node) continue;
      if (!grid.inside(p.node) || grid.boundary_dist(p.node) <= grid.h()) ok = false;
    }
    report.interior.push_back(ok);
    if (!ok) report.touching_nodes.push_back(nw.node);
  }
  return report;
}

void write_witness(std::ostream& out, const EnvelopeWitness& witness, const Grid& grid) {
  out << "# witness nx=" << grid.nx() << " ny=" << grid.ny() << '\n';
  char buf[40];
  for (const auto& nw : witness.nodes) {
    out << nw.points.size();
    for (const auto& p : nw.points) {
      std::snprintf(buf, sizeof buf, "%.17g", p.lambda);
      out << ' ' << grid.ix(p.node) << ' ' << grid.iy(p.node) << ' ' << buf;
    }
    out << '\n';
  }
}

void write_witness(const std::string& path, const EnvelopeWitness& witness, const Grid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_witness(out, witness, grid);
}

template <int Dim>
std::optional<QuadraticProbe<double, Dim>> fit_quadratic(const ScalarField& field, int node) {
  const Grid& g = field.grid();
  if (g.dimension() != Dim) throw std::invalid_argument("fit dimension does not match the grid");
  const int ix = g.ix(node);
  const int iy = g.iy(node);
  const double h = g.h();
  constexpr int kPoints = Dim == 1 ? 3 : 9;
  constexpr int kUnknowns = Dim == 1 ? 3 : 6;
  Eigen::Matrix<double, kPoints, kUnknowns> design;
  Eigen::Matrix<double, kPoints, 1> rhs;
  int row = 0;
  for (int dy = (Dim == 1 ? 0 : -1); dy <= (Dim == 1 ? 0 : 1); ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int jx = ix + dx;
      const int jy = iy + dy;
      if (jx < 0 || jy < 0 || jx >= g.nx() || jy >= g.ny()) return std::nullopt;
      const int nb = g.index(jx, jy);
      if (!g.inside(nb)) return std::nullopt;
      const double x = dx * h;
      const double y = dy * h;
      if constexpr (Dim == 1) {
        design.row(row) << 1.0, x, 0.5 * x * x;
      } else {
        design.row(row) << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
      }
      rhs[row] = field[nb];
      ++row;
    }
  }
  const Eigen::Matrix<double, kUnknowns, 1> coef = design.colPivHouseholderQr().solve(rhs);
  QuadraticProbe<double, Dim> probe;
  probe.x0 = g.position(node).template head<Dim>();
  probe.value = coef[0];
  if constexpr (Dim == 1) {
    probe.p << coef[1];
    probe.A << coef[2];
  } else {
    probe.p << coef[1], coef[2];
    probe.A << coef[3], coef[4], coef[4], coef[5];
  }
  return probe;
}

template std::optional<Probe1d> fit_quadratic<1>(const ScalarField&, int);
template std::optional<Probe2d> fit_quadratic<2>(const ScalarField&, int);

namespace {

template <int Dim>
ProbeScan scan_impl(const TransformedField& tf, double u_floor, double tol) {
  ProbeScan scan;
  bool first = true;
  for (int node : tf.w.grid().inside_nodes()) {
    if (tf.source[node] < u_floor) continue;
    const auto probe = fit_quadratic<Dim>(tf.w, node);
    if (!probe) continue;
    const auto verdict = restricted_super_probe(tf.w[node], *probe, tol);
    ++scan.checked;
    if (!verdict.pass) ++scan.failed;
    if (verdict.critical) ++scan.critical;
    if (first || verdict.F < scan.min_F) {
      scan.min_F = verdict.F;
      scan.worst_node = node;
      first = false;
    }
  }
  return scan;
}

}  // namespace

ProbeScan scan_restricted_super(const TransformedField& tf, double u_floor, double tol) {
  return tf.w.grid().dimension() == 1 ? scan_impl<1>(tf, u_floor, tol) : scan_impl<2>(tf, u_floor, tol);
}

}  // namespace ninf
