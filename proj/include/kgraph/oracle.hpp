#ifndef KGRAPH_ORACLE_HPP
#define KGRAPH_ORACLE_HPP

// Independent cross-checks: seeded random inputs, a Monte-Carlo cylinder
// sampler and the consolidated check suite.

#include "kgraph/kms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kgraph {

/// Counter-based generator: value i of stream s is SplitMix64 applied to a
/// mix of (seed, s, i). There is no hidden state beyond the counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on {0, .., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// k commuting nonnegative integer matrices c0 + c1 M + c2 M^2 of one
/// random matrix M with entries in {0, 1, 2}.
std::vector<IntMatrix> random_integer_family(std::uint64_t seed, int size, int k);

MatrixFamily random_commuting_family(std::uint64_t seed, int size, int k);

/// B_i / (rho(B_i) s_i) with s_i drawn from {1, 1, 1.5, 2.5}; zero-radius
/// matrices are left alone. Keeps some matrices exactly critical.
MatrixFamily normalize_family(std::uint64_t seed, const MatrixFamily& family);

/// A unit 1-norm sub-invariant vector built from nonnegative joint
/// eigenvectors (and Neumann-smoothed noise when every radius is below 1).
/// Throws GenerationError after 1000 rejected draws.
VertexVector random_subinvariant(std::uint64_t seed, const MatrixFamily& family);

struct McEstimate {
  double estimate = 0;
  double standard_error = 0;
  double expected = 0;  // e^{-beta r.d(lambda)} y_{s(lambda)} / y_{r(lambda)}
};

/// Frequency of the cylinder of lambda among sampled paths that start at
/// r(lambda). Multiplying by y_{r(lambda)} gives the state's cylinder mass.
/// Throws MatricesOnlyError, SupportError or RangeError (samples < 1000).
McEstimate mc_cylinder_estimate(const KGraph& g, const ExtremeState& state, const Path& lambda,
                                std::int64_t samples, std::uint64_t seed, const Query& q);

struct CheckEntry {
  std::string name;
  bool pass = true;
  double error = 0;
  double tolerance = 0;
  std::uint64_t seed = 0;
  std::string note;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool pass() const;
};

CheckReport check_suite(const KGraph& g, const Query& q, std::uint64_t seed, int threads = 1);

}  // namespace kgraph

#endif  // KGRAPH_ORACLE_HPP
