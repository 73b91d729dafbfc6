#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace ninf {

/// psi(x) = value + <p, x - x0> + 1/2 <A (x - x0), x - x0>.
///
/// Stands in for a C^2 test function touching a field at x0; only its
/// second-order jet enters the operators below.
template <class Scalar, int Dim>
struct QuadraticProbe {
  using Vector = Eigen::Matrix<Scalar, Dim, 1>;
  using Matrix = Eigen::Matrix<Scalar, Dim, Dim>;

  Vector x0 = Vector::Zero();
  Scalar value = Scalar(0);
  Vector p = Vector::Zero();
  Matrix A = Matrix::Zero();

  Scalar operator()(const Vector& x) const {
    const Vector d = x - x0;
    return value + p.dot(d) + Scalar(0.5) * d.dot(A * d);
  }

  bool symmetric(Scalar tol = Scalar(1e-12)) const { return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol; }
};

using Probe1d = QuadraticProbe<double, 1>;
using Probe2d = QuadraticProbe<double, 2>;

template <class Scalar>
struct ValueRange {
  Scalar lo;
  Scalar hi;
};

/// Extreme eigenvalues of a symmetric matrix.
template <class Derived>
ValueRange<typename Derived::Scalar> eigen_range(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(A), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

/// Normalized infinity Laplacian of a second-order jet (p, A).
///
/// Away from critical points this is <A p, p> / |p|^2 (a single value); at
/// p = 0 the operator is set-valued and the result spans
/// [lambda_min(A), lambda_max(A)].
template <class DerivedP, class DerivedA>
ValueRange<typename DerivedP::Scalar> normalized_inf_laplacian(const Eigen::MatrixBase<DerivedP>& p,
                                                               const Eigen::MatrixBase<DerivedA>& A) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar pp = p.squaredNorm();
  if (pp == Scalar(0)) return eigen_range(A);
  const Scalar q = p.dot(A * p) / pp;
  return {q, q};
}

template <class Scalar, int Dim>
ValueRange<Scalar> normalized_inf_laplacian(const QuadraticProbe<Scalar, Dim>& probe) {
  return normalized_inf_laplacian(probe.p, probe.A);
}

/// F(w, p, A) = -<A p, p> - (|p|^4 + |p|^2 / 2) / w, defined for w < 0.
///
/// w = -sqrt(u) turns -Delta_inf^N u = 1 into F(w, Dw, D^2 w) = 0.
template <class Scalar, class DerivedP, class DerivedA>
Scalar evaluate_F(Scalar w, const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedA>& A) {
  if (!(w < Scalar(0))) throw std::invalid_argument("F is defined only for w < 0");
  const Scalar pp = p.squaredNorm();
  return -p.dot(A * p) - (pp * pp + Scalar(0.5) * pp) / w;
}

template <class Scalar>
struct ProbeVerdict {
  bool pass;
  Scalar F;
  bool critical;       // the probe gradient vanished
  Scalar eigenvalue;   // lambda_min (super) or lambda_max (sub) at critical points
  Scalar threshold;    // -1 / (2 w)
};

/// Algebraic conditions a restricted supersolution imposes on a probe touching
/// from below: F >= 0, and lambda_min(A) <= -1/(2w) when the gradient vanishes.
/// `tol` absorbs rounding (and fitting error when probes come from data).
template <class Scalar, int Dim>
ProbeVerdict<Scalar> restricted_super_probe(Scalar w, const QuadraticProbe<Scalar, Dim>& probe,
                                            Scalar tol = Scalar(64) * std::numeric_limits<Scalar>::epsilon()) {
  const Scalar F = evaluate_F(w, probe.p, probe.A);
  const Scalar threshold = Scalar(-1) / (Scalar(2) * w);
  ProbeVerdict<Scalar> v{F >= -tol, F, false, Scalar(0), threshold};
  if (probe.p.squaredNorm() == Scalar(0)) {
    v.critical = true;
    v.eigenvalue = eigen_range(probe.A).lo;
    v.pass = v.pass && v.eigenvalue <= threshold + tol * std::max(Scalar(1), std::abs(threshold));
  }
  return v;
}

/// Mirror of restricted_super_probe for probes touching from above:
/// F <= 0, and lambda_max(A) >= -1/(2w) when the gradient vanishes.
template <class Scalar, int Dim>
ProbeVerdict<Scalar> restricted_sub_probe(Scalar w, const QuadraticProbe<Scalar, Dim>& probe,
                                          Scalar tol = Scalar(64) * std::numeric_limits<Scalar>::epsilon()) {
  const Scalar F = evaluate_F(w, probe.p, probe.A);
  const Scalar threshold = Scalar(-1) / (Scalar(2) * w);
  ProbeVerdict<Scalar> v{F <= tol, F, false, Scalar(0), threshold};
  if (probe.p.squaredNorm() == Scalar(0)) {
    v.critical = true;
    v.eigenvalue = eigen_range(probe.A).hi;
    v.pass = v.pass && v.eigenvalue >= threshold - tol * std::max(Scalar(1), std::abs(threshold));
  }
  return v;
}

}  // namespace ninf
