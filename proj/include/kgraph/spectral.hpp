#ifndef KGRAPH_SPECTRAL_HPP
#define KGRAPH_SPECTRAL_HPP

// Numerical core for families of commuting nonnegative matrices.

#include "kgraph/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace kgraph {

/// Real vector indexed by vertex order.
using VertexVector = Eigen::VectorXd;

/// Pairwise commuting nonnegative square matrices B_1..B_k of equal size.
using MatrixFamily = std::vector<Eigen::MatrixXd>;

Eigen::MatrixXd to_real(const IntMatrix& m);

/// Principal submatrix on the given (sorted) index set.
Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& m, const VertexSet& set);
VertexVector restrict_to(const VertexVector& x, const VertexSet& set);
/// Inverse of restrict_to for vectors: zero outside `set`.
VertexVector extend_from(const VertexVector& x, const VertexSet& set, Eigen::Index size);

/// Strongly connected components of the support graph of m (arc i -> j when
/// m(i, j) > 0). Components are listed by smallest member.
std::vector<VertexSet> strong_components(const Eigen::MatrixXd& m);

/// Perron root of a nonnegative matrix: the maximum over irreducible
/// diagonal blocks of the largest eigenvalue modulus. Returns 0 for 0x0.
double spectral_radius(const Eigen::MatrixXd& m);

struct SubinvarianceCheck {
  bool pass = true;
  ColorSet witness;   // the failing subset I
  int index = -1;     // the failing entry
  double value = 0;   // prod_{i in I}(1 - B_i) psi at that entry

  explicit operator bool() const { return pass; }
};

/// Tests prod_{i in I}(1 - B_i) psi >= -1e-9 for every subset I.
/// Throws DimensionError.
SubinvarianceCheck is_subinvariant(const MatrixFamily& family, const VertexVector& psi);

struct RieszSplit {
  VertexVector invariant;  // lim_n B^n psi
  VertexVector decaying;   // psi - invariant
};

/// Splits psi with B psi <= psi (+1e-9) into its B-invariant limit and the
/// remainder. Throws NotSubinvariantError or ConvergenceError.
RieszSplit riesz_split(const Eigen::MatrixXd& b, const VertexVector& psi);

/// h^I for every I, indexed by ColorSet mask. `order` lists the matrix
/// indices in processing order; empty means 0, 1, .., k-1.
/// Throws NotSubinvariantError or ConvergenceError.
std::vector<VertexVector> decompose_subinvariant(const MatrixFamily& family,
                                                 const VertexVector& psi,
                                                 std::span<const int> order = {});

/// prod_j (1 - B_j)^{-1} psi. Throws SpectralRadiusError unless every
/// rho(B_j) < 1 - 1e-9.
VertexVector neumann_sum(const MatrixFamily& family, const VertexVector& psi);

/// Orthonormal basis (as columns) of the joint kernel of (M_i - lambda_i).
Eigen::MatrixXd joint_kernel(const MatrixFamily& mats, std::span<const double> lambdas);

/// A vector x in the column span of `basis` with x >= 0 and sum(x) = 1, if
/// one exists.
std::optional<VertexVector> nonnegative_point_in_span(const Eigen::MatrixXd& basis);

/// Sets entries in [-1e-9, 0) to zero. Returns the most negative entry seen
/// (0 if none), so callers can reject genuine violations.
double clamp_roundoff(VertexVector& x);

}  // namespace kgraph

#endif  // KGRAPH_SPECTRAL_HPP
