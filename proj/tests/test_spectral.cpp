#include "fixtures.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/oracle.hpp"
#include "kgraph/spectral.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace kgraph;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m1(double x) { return MatrixXd::Constant(1, 1, x); }
VectorXd v1(double x) { return VectorXd::Constant(1, x); }

// Gelfand's formula by repeated squaring: rho = lim ||M^n||^{1/n}, with the
// scale kept in log form.
double gelfand_radius(MatrixXd m) {
  double log_scale = 0;
  double n = 1;
  for (int step = 0; step < 60; ++step) {
    const double norm = m.cwiseAbs().sum();
    if (norm == 0) return 0;
    m /= norm;
    log_scale += std::log(norm) / n;
    m = m * m;
    n *= 2;
  }
  const double norm = m.cwiseAbs().sum();
  return norm == 0 ? 0 : std::exp(log_scale + std::log(norm) / n);
}

MatrixXd random_nonnegative(std::uint64_t seed, int n, double zero_fraction) {
  CounterRng rng(seed, 99);
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = rng.uniform01() < zero_fraction ? 0.0 : rng.uniform01() * 3;
  return m;
}

VectorXd iterate(const MatrixXd& b, VectorXd x, int times) {
  for (int t = 0; t < times; ++t) x = b * x;
  return x;
}

MatrixFamily ex1_family() {
  const KGraph g = fixtures::ex1();
  return {to_real(g.matrix(0)) / 5.0, to_real(g.matrix(1)) / 4.0};
}

}  // namespace

TEST(SpectralRadius, Examples) {
  const KGraph g = fixtures::ex1();
  EXPECT_NEAR(spectral_radius(restrict_to(to_real(g.matrix(0)), {2})), 5, 1e-10);
  for (auto [p, q] : {std::pair{1, 4}, {2, 3}, {5, 5}}) {
    MatrixXd m(2, 2);
    m << 0, p, q, 0;
    EXPECT_NEAR(spectral_radius(m), std::sqrt(double(p * q)), 1e-10);
  }
  EXPECT_EQ(spectral_radius(MatrixXd::Zero(3, 3)), 0);
  EXPECT_EQ(spectral_radius(MatrixXd(0, 0)), 0);
}

TEST(SpectralRadius, NilpotentAboveDiagonal) {
  MatrixXd m(3, 3);
  m << 0, 7, 1, 0, 0, 9, 0, 0, 0;
  EXPECT_EQ(spectral_radius(m), 0);
}

TEST(SpectralRadius, AgreesWithGelfandFormula) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 7);
    const MatrixXd m = random_nonnegative(seed, n, seed % 3 == 0 ? 0.7 : 0.3);
    const double expect = gelfand_radius(m);
    EXPECT_NEAR(spectral_radius(m), expect, 1e-8 * std::max(1.0, expect)) << "seed " << seed;
  }
}

TEST(StrongComponents, SplitsTriangularBlocks) {
  MatrixXd m(3, 3);
  m << 1, 1, 0, 1, 1, 1, 0, 0, 2;
  auto blocks = strong_components(m);
  std::sort(blocks.begin(), blocks.end());
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (VertexSet{0, 1}));
  EXPECT_EQ(blocks[1], (VertexSet{2}));
}

TEST(Subinvariance, Examples) {
  EXPECT_TRUE(is_subinvariant({m1(0.5), m1(1.0)}, v1(1)));
  const auto fail = is_subinvariant({m1(2.0)}, v1(1));
  EXPECT_FALSE(fail);
  EXPECT_EQ(fail.witness.mask(), 1u);
  EXPECT_EQ(fail.index, 0);
  EXPECT_NEAR(fail.value, -1, 1e-15);
  EXPECT_THROW(is_subinvariant({m1(0.5)}, VectorXd::Ones(2)), DimensionError);
}

TEST(Subinvariance, ChecksEveryProduct) {
  // Each B_i psi <= psi holds, but (1 - B_1)(1 - B_2) psi has a negative
  // entry.
  MatrixXd b1(2, 2), b2(2, 2);
  b1 << 0, 0, 1, 0;
  b2 << 0, 0, 1, 0;
  const VectorXd psi = VectorXd::Ones(2);
  const auto check = is_subinvariant({b1, b2}, psi);
  EXPECT_FALSE(check);
  EXPECT_EQ(check.witness.mask(), 3u);
}

TEST(Riesz, Examples) {
  auto zero = riesz_split(m1(0), v1(1));
  EXPECT_EQ(zero.invariant(0), 0);
  EXPECT_EQ(zero.decaying(0), 1);
  auto one = riesz_split(m1(1), v1(1));
  EXPECT_EQ(one.invariant(0), 1);
  EXPECT_EQ(one.decaying(0), 0);

  MatrixXd b(2, 2);
  b << 0.5, 0.5, 0, 1;
  VectorXd psi(2);
  psi << 2, 1;
  const auto split = riesz_split(b, psi);
  const VectorXd oracle = iterate(b, psi, 200);
  EXPECT_LT((split.invariant - oracle).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(split.invariant(0), 1, 1e-12);
  EXPECT_NEAR(split.decaying(0), 1, 1e-12);
  EXPECT_EQ(split.invariant + split.decaying, psi);
}

TEST(Riesz, RejectsNonSubinvariant) {
  EXPECT_THROW(riesz_split(m1(2), v1(1)), NotSubinvariantError);
}

TEST(Riesz, Properties) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const MatrixFamily fam = normalize_family(seed, random_commuting_family(seed, 4, 1));
    const VectorXd psi = random_subinvariant(seed, fam);
    const auto split = riesz_split(fam[0], psi);
    EXPECT_LT((fam[0] * split.invariant - split.invariant).cwiseAbs().maxCoeff(), 1e-9);
    const auto again = riesz_split(fam[0], split.decaying);
    EXPECT_LT(again.invariant.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((split.invariant + split.decaying - psi).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Decompose, Examples) {
  const auto h = decompose_subinvariant({m1(0.5), m1(1.0)}, v1(1));
  ASSERT_EQ(h.size(), 4u);
  EXPECT_NEAR(h[2](0), 1, 1e-12);
  EXPECT_NEAR(h[0](0) + h[1](0) + h[3](0), 0, 1e-12);

  VectorXd yw(3);
  yw << 0.5, 0, 0.5;
  const auto parts = decompose_subinvariant(ex1_family(), yw);
  EXPECT_LT((parts[3] - yw).cwiseAbs().maxCoeff(), 1e-9);
  for (int mask = 0; mask < 3; ++mask) EXPECT_LT(parts[mask].cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Decompose, MixtureOnEx1) {
  // (1/2, 0, 1/2) is invariant for both; delta_u decays under both.
  VectorXd psi(3);
  psi << 0.75, 0, 0.25;
  const auto parts = decompose_subinvariant(ex1_family(), psi);
  EXPECT_NEAR(parts[3](0), 0.25, 1e-9);
  EXPECT_NEAR(parts[3](2), 0.25, 1e-9);
  EXPECT_NEAR(parts[0](0), 0.5, 1e-9);
}

TEST(Neumann, Examples) {
  EXPECT_NEAR(neumann_sum({m1(0.5)}, v1(1))(0), 2, 1e-14);
  EXPECT_EQ(neumann_sum({}, v1(3))(0), 3);
  EXPECT_THROW(neumann_sum({m1(1.0)}, v1(1)), SpectralRadiusError);
}

TEST(Neumann, AgreesWithTruncatedSeries) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MatrixFamily fam = random_commuting_family(seed, 3, 2);
    for (auto& b : fam) {
      const double rho = spectral_radius(b);
      if (rho > 0) b *= 0.8 / rho;
    }
    CounterRng rng(seed, 17);
    VectorXd psi(3);
    for (int i = 0; i < 3; ++i) psi(i) = rng.uniform01();
    // sum_{n1, n2 <= 200} B_1^{n1} B_2^{n2} psi.
    VectorXd inner = VectorXd::Zero(3), term = psi;
    for (int n = 0; n <= 200; ++n, term = fam[1] * term) inner += term;
    VectorXd series = VectorXd::Zero(3);
    term = inner;
    for (int n = 0; n <= 200; ++n, term = fam[0] * term) series += term;
    EXPECT_LT((neumann_sum(fam, psi) - series).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(JointKernel, IntersectsEigenspaces) {
  MatrixXd a(3, 3), b(3, 3);
  a << 1, 0, 0, 0, 1, 0, 0, 0, 2;
  b << 3, 0, 0, 0, 4, 0, 0, 0, 3;
  const std::vector<double> one_three{1, 3};
  const MatrixXd k = joint_kernel({a, b}, one_three);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(0, 0)), 1, 1e-12);
  const std::vector<double> two_four{2, 4};
  EXPECT_EQ(joint_kernel({a, b}, two_four).cols(), 0);
}

TEST(Feasibility, FindsNonnegativePoint) {
  MatrixXd basis(3, 2);
  basis << 1, 1, 1, -1, 0, 3;
  const auto x = nonnegative_point_in_span(basis);
  ASSERT_TRUE(x.has_value());
  EXPECT_GE(x->minCoeff(), -1e-12);
  EXPECT_NEAR(x->sum(), 1, 1e-12);
  // x must lie in the span: its component orthogonal to the columns vanishes.
  const MatrixXd q = basis.householderQr().householderQ() * MatrixXd::Identity(3, 2);
  EXPECT_LT((*x - q * (q.transpose() * *x)).norm(), 1e-12);
}

TEST(Feasibility, ReportsInfeasibleSpan) {
  MatrixXd basis(2, 1);
  basis << 1, -1;
  EXPECT_FALSE(nonnegative_point_in_span(basis).has_value());
  MatrixXd plane(3, 2);
  plane << 1, 0, -1, 1, 0, -1;  // sums to zero everywhere
  EXPECT_FALSE(nonnegative_point_in_span(plane).has_value());
}

TEST(Clamp, ZeroesRoundoffOnly) {
  VectorXd x(3);
  x << -1e-13, 0.5, -1e-6;
  EXPECT_EQ(clamp_roundoff(x), -1e-6);
  EXPECT_EQ(x(0), 0);
  EXPECT_EQ(x(2), -1e-6);
}
