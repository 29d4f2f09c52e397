// Nonnegative points in a linear subspace: x in span(basis), x >= 0,
// sum(x) = 1. Solved as a phase-one simplex problem with Bland's rule.

#include "kgraph/spectral.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace kgraph {

namespace {

constexpr double kPivotTolerance = 1e-10;

std::optional<VertexVector> normalize_direction(VertexVector q) {
  const double scale = q.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::nullopt;
  Eigen::Index at = 0;
  q.cwiseAbs().maxCoeff(&at);
  if (q(at) < 0) q = -q;
  q /= scale;
  if (q.minCoeff() < -1e-7) return std::nullopt;
  q = q.cwiseMax(0.0);
  return q / q.sum();
}

// Minimises the sum of artificial variables for A x = b, x >= 0, b >= 0.
// Returns x when the optimum is zero.
std::optional<VertexVector> phase_one(const Eigen::MatrixXd& a, const VertexVector& b) {
  const Eigen::Index m = a.rows(), n = a.cols();
  // Tableau columns: n structural, m artificial, then the right-hand side.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  t.col(n + m).head(m) = b;
  std::vector<Eigen::Index> basic(m);
  for (Eigen::Index i = 0; i < m; ++i) basic[i] = n + i;
  // Reduced costs of the phase-one objective.
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  t.block(m, n, 1, m).setZero();

  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -kPivotTolerance) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotTolerance) {
        const double ratio = t(i, n + m) / t(i, enter);
        if (ratio < best - kPivotTolerance ||
            (std::abs(ratio - best) <= kPivotTolerance && basic[i] < basic[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded direction; cannot happen in phase one
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    basic[leave] = enter;
  }
  if (-t(m, n + m) > 1e-9) return std::nullopt;
  VertexVector x = VertexVector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basic[i] < n) x(basic[i]) = t(i, n + m);
  return x;
}

}  // namespace

std::optional<VertexVector> nonnegative_point_in_span(const Eigen::MatrixXd& basis) {
  const Eigen::Index n = basis.rows(), d = basis.cols();
  if (d == 0 || n == 0) return std::nullopt;
  if (d == 1) return normalize_direction(basis.col(0));

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd span = q.leftCols(d);
  const Eigen::MatrixXd perp = q.rightCols(n - d);

  Eigen::MatrixXd a(n - d + 1, n);
  a.topRows(n - d) = perp.transpose();
  a.row(n - d).setOnes();
  VertexVector b = VertexVector::Zero(n - d + 1);
  b(n - d) = 1.0;
  auto x = phase_one(a, b);
  if (!x) return std::nullopt;
  VertexVector projected = span * (span.transpose() * *x);
  if (projected.minCoeff() < -1e-7) return std::nullopt;
  projected = projected.cwiseMax(0.0);
  if (projected.sum() <= 0.0) return std::nullopt;
  return VertexVector(projected / projected.sum());
}

}  // namespace kgraph
