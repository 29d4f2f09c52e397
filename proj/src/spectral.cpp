#include "kgraph/spectral.hpp"

#include "kgraph/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kgraph {

namespace {

constexpr double kNegativeTolerance = 1e-9;
constexpr double kStepTolerance = 1e-12;
constexpr int kMaxDoublings = 64;

}  // namespace

Eigen::MatrixXd to_real(const IntMatrix& m) { return m.cast<double>(); }

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& m, const VertexSet& set) {
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(set[a], set[b]);
  return out;
}

VertexVector restrict_to(const VertexVector& x, const VertexSet& set) {
  VertexVector out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t a = 0; a < set.size(); ++a) out(static_cast<Eigen::Index>(a)) = x(set[a]);
  return out;
}

VertexVector extend_from(const VertexVector& x, const VertexSet& set, Eigen::Index size) {
  VertexVector out = VertexVector::Zero(size);
  for (std::size_t a = 0; a < set.size(); ++a) out(set[a]) = x(static_cast<Eigen::Index>(a));
  return out;
}

std::vector<VertexSet> strong_components(const Eigen::MatrixXd& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < n; ++j)
      if (m(i, j) > 0) reach[i][j] = 1;
  }
  for (int via = 0; via < n; ++via)
    for (int i = 0; i < n; ++i)
      if (reach[i][via])
        for (int j = 0; j < n; ++j)
          if (reach[via][j]) reach[i][j] = 1;
  std::vector<VertexSet> out;
  std::vector<char> done(n, 0);
  for (int i = 0; i < n; ++i) {
    if (done[i]) continue;
    out.emplace_back();
    for (int j = i; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) {
        done[j] = 1;
        out.back().push_back(j);
      }
    }
  }
  return out;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  double rho = 0.0;
  for (const VertexSet& block : strong_components(m)) {
    if (block.size() == 1) {
      rho = std::max(rho, std::abs(m(block[0], block[0])));
      continue;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(restrict_to(m, block), false);
    rho = std::max(rho, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return rho;
}

SubinvarianceCheck is_subinvariant(const MatrixFamily& family, const VertexVector& psi) {
  for (const auto& b : family)
    if (b.rows() != psi.size() || b.cols() != psi.size())
      throw DimensionError("family matrices and vector have different sizes");
  const auto k = static_cast<int>(family.size());
  SubinvarianceCheck worst;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    VertexVector x = psi;
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1u) x = x - family[i] * x;
    if (x.size() == 0) continue;
    Eigen::Index at = 0;
    const double low = x.minCoeff(&at);
    if (low < -kNegativeTolerance && (worst.pass || low < worst.value)) {
      worst.pass = false;
      worst.witness = ColorSet::from_mask(mask);
      worst.index = static_cast<int>(at);
      worst.value = low;
    }
  }
  return worst;
}

RieszSplit riesz_split(const Eigen::MatrixXd& b, const VertexVector& psi) {
  if (b.rows() != psi.size() || b.cols() != psi.size())
    throw DimensionError("matrix and vector have different sizes");
  const VertexVector excess = b * psi - psi;
  Eigen::Index at = 0;
  if (psi.size() > 0 && excess.maxCoeff(&at) > kNegativeTolerance) {
    std::ostringstream msg;
    msg << "B psi exceeds psi by " << excess(at) << " at index " << at;
    throw NotSubinvariantError(msg.str());
  }
  // B^n psi stays inside supp(psi); on the support, B psi <= psi bounds every
  // power of B, so repeated squaring is safe and reaches the limit quickly.
  VertexSet support;
  for (Eigen::Index v = 0; v < psi.size(); ++v)
    if (psi(v) > 0) support.push_back(static_cast<int>(v));
  Eigen::MatrixXd power = restrict_to(b, support);
  VertexVector x = restrict_to(psi, support);
  bool converged = support.empty();
  for (int step = 0; step < kMaxDoublings && !converged; ++step) {
    VertexVector next = power * x;
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = next;
    converged = change < kStepTolerance;
    if (!converged) power = power * power;
  }
  if (!converged) throw ConvergenceError("lim B^n psi did not converge");
  RieszSplit out;
  out.invariant = extend_from(x.cwiseMax(0.0), support, psi.size());
  out.decaying = psi - out.invariant;
  if (clamp_roundoff(out.decaying) < -kNegativeTolerance)
    throw NotSubinvariantError("B^n psi increased above psi");
  out.invariant = psi - out.decaying;
  return out;
}

std::vector<VertexVector> decompose_subinvariant(const MatrixFamily& family,
                                                 const VertexVector& psi,
                                                 std::span<const int> order) {
  if (auto check = is_subinvariant(family, psi); !check) {
    std::ostringstream msg;
    msg << "vector is not sub-invariant: subset mask " << check.witness.mask() << ", index "
        << check.index << ", value " << check.value;
    throw NotSubinvariantError(msg.str());
  }
  const auto k = static_cast<int>(family.size());
  std::vector<int> sequence(order.begin(), order.end());
  if (sequence.empty()) {
    sequence.resize(k);
    std::iota(sequence.begin(), sequence.end(), 0);
  }
  std::vector<VertexVector> pieces(1u << k, VertexVector::Zero(psi.size()));
  pieces[0] = psi;
  std::uint32_t done = 0;
  for (int i : sequence) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if ((mask & ~done) != 0 || (mask & bit) != 0) continue;
      if (pieces[mask].isZero(0.0)) continue;
      RieszSplit split = riesz_split(family[i], pieces[mask]);
      pieces[mask | bit] = std::move(split.invariant);
      pieces[mask] = std::move(split.decaying);
    }
    done |= bit;
  }
  return pieces;
}

VertexVector neumann_sum(const MatrixFamily& family, const VertexVector& psi) {
  VertexVector x = psi;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const Eigen::MatrixXd& b = family[j];
    if (b.rows() != psi.size() || b.cols() != psi.size())
      throw DimensionError("family matrices and vector have different sizes");
    const double rho = spectral_radius(b);
    if (!(rho < 1.0 - 1e-9)) {
      std::ostringstream msg;
      msg << "spectral radius " << rho << " of matrix " << j + 1 << " is not below 1";
      throw SpectralRadiusError(msg.str());
    }
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(b.rows(), b.cols()) - b;
    x = a.fullPivLu().solve(x);
  }
  clamp_roundoff(x);
  return x;
}

Eigen::MatrixXd joint_kernel(const MatrixFamily& mats, std::span<const double> lambdas) {
  const Eigen::Index n = mats.empty() ? 0 : mats.front().rows();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < mats.size() && basis.cols() > 0; ++i) {
    const Eigen::MatrixXd shifted = mats[i] - lambdas[i] * Eigen::MatrixXd::Identity(n, n);
    const double cutoff = 1e-9 * std::max(1.0, mats[i].norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted * basis, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index t = 0; t < sv.size(); ++t)
      if (sv(t) > cutoff) ++rank;
    const Eigen::Index nullity = basis.cols() - rank;
    basis = basis * svd.matrixV().rightCols(nullity);
  }
  return basis;
}

double clamp_roundoff(VertexVector& x) {
  double low = 0.0;
  for (Eigen::Index v = 0; v < x.size(); ++v) {
    if (x(v) < 0.0) {
      low = std::min(low, x(v));
      if (x(v) >= -kNegativeTolerance) x(v) = 0.0;
    }
  }
  return low;
}

}  // namespace kgraph
