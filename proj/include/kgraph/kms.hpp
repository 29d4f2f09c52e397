#ifndef KGRAPH_KMS_HPP
#define KGRAPH_KMS_HPP

// Classification of the KMS states of the Toeplitz algebra of a finite
// k-graph for the dynamics given by (beta, r).

#include "kgraph/graph.hpp"
#include "kgraph/query.hpp"
#include "kgraph/spectral.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace kgraph {

/// A ~_I class C with the data used to certify it.
struct SubharmonicComponent {
  VertexSet C;
  ColorSet I;
  VertexSet closure_I;     // {w : w <=_I v for some v in C}
  VertexSet closure_full;  // the same for all colours
  std::vector<double> rho_C;        // rho(A_i restricted to C), every colour
  std::vector<double> rho_closure;  // rho(A_j restricted to closure_full), every colour
  std::vector<VertexSet> dominated; // the other ~_I classes inside closure_I
};

struct SubharmonicCheck {
  bool pass = false;
  bool dominant = true;  // the beta-independent domination condition alone
  std::string reason;    // empty when pass
  SubharmonicComponent component;

  explicit operator bool() const { return pass; }
};

/// Output order for (I, C) pairs: by |I|, then I, then C.
bool component_less(ColorSet I1, const VertexSet& C1, ColorSet I2, const VertexSet& C2);

/// Throws NotAClassError when C is not a ~_I class.
SubharmonicCheck is_subharmonic(const KGraph& g, const VertexSet& C, ColorSet I, const Query& q);

/// Every certified (C, I), sorted by (|I|, I, C).
std::vector<SubharmonicComponent> find_subharmonic(const KGraph& g, const Query& q,
                                                   int threads = 1);

/// {e^{-beta r_i} A_i}.
MatrixFamily scaled_family(const KGraph& g, const Query& q);

/// x^C: unit 1-norm joint eigenvector supported on closure_I.
/// Throws CertificationError or DegenerateKernelError.
VertexVector harmonic_vector(const KGraph& g, const SubharmonicComponent& sc, const Query& q);

struct KmsVectors {
  VertexVector x;       // harmonic_vector
  VertexVector xtilde;  // Neumann inflation of x over the colours outside I
  VertexVector y;       // xtilde / ||xtilde||_1
};

KmsVectors kms_vector(const KGraph& g, const SubharmonicComponent& sc, const Query& q);

/// prod_{j not in I} (1 - e^{-beta r_j} A_j) psi. Throws NegativeMassError.
VertexVector boundary_vector(const KGraph& g, const VertexVector& psi, ColorSet I,
                             const Query& q);

struct WeightedComponent {
  SubharmonicComponent component;
  double weight = 0;
};

/// Writes psi as a convex combination of the vectors y^C.
/// Throws NotSubinvariantError or ResidualError.
std::vector<WeightedComponent> decompose_kms(const KGraph& g, const VertexVector& psi,
                                             const Query& q);

struct PeriodicityGroup {
  ColorSet I;
  /// Z-basis in Hermite normal form, each vector of length k with zeros
  /// outside I.
  std::vector<std::vector<int>> generators;
  int search_bound = 0;
  bool complete = true;

  int rank() const { return static_cast<int>(generators.size()); }
  /// Integer coordinates of p in the basis, or nullopt if p is not in the group.
  std::optional<std::vector<int>> coordinates(const std::vector<int>& p) const;
};

/// Per_I(C) by bounded search over candidates |p_i| <= bound.
/// Throws MatricesOnlyError, NotAClassError or CertificationError.
PeriodicityGroup periodicity_group(const KGraph& g, const VertexSet& C, ColorSet I, int bound);

bool factors_through_ck(const KGraph& g, const SubharmonicComponent& sc);

struct ExtremeState {
  SubharmonicComponent component;
  VertexVector y;
  double xtilde_norm = 1;
  /// Absent when factorisation data is unavailable and I is nonempty.
  std::optional<PeriodicityGroup> per;
  bool factors_through_ck = false;
  /// Angles selecting a character of Per_I(C), one per generator. Absent
  /// means the gauge-invariant state, whose off-diagonal values vanish; the
  /// two agree when Per_I(C) is trivial.
  std::optional<std::vector<double>> character;
};

struct SimplexOptions {
  std::optional<int> per_bound;  // default |C|
  int threads = 1;
};

struct SimplexDescription {
  Query query;
  std::vector<ExtremeState> states;
};

SimplexDescription simplex(const KGraph& g, const Query& q, const SimplexOptions& options = {});

struct StateValue {
  std::complex<double> value;
  /// Set when the answer relied on a periodicity group found by bounded search.
  bool incomplete_periodicity = false;
};

/// omega(S_lambda S_mu^*). Requires s(lambda) = s(mu).
StateValue state_eval(const KGraph& g, const ExtremeState& state, const Path& lambda,
                      const Path& mu, const Query& q);

/// The same for the gauge-invariant state with vector psi (any mixture).
StateValue state_eval(const KGraph& g, const VertexVector& psi, const Path& lambda,
                      const Path& mu, const Query& q);

struct BetaSet {
  enum class Kind { empty, point, interval, all };
  Kind kind = Kind::empty;
  double lo = 0;  // point value, or open lower end (may be -inf)
  double hi = 0;  // open upper end (may be +inf)
  std::optional<std::string> lo_expr;  // exact forms when r came from log bases
  std::optional<std::string> hi_expr;

  bool contains(double beta) const;
};

struct BetaRow {
  ColorSet I;
  VertexSet C;
  BetaSet beta_set;
};

struct BetaTable {
  std::vector<double> r;
  std::optional<std::vector<Rational>> log_bases;
  std::vector<BetaRow> rows;  // sorted by (|I|, I, C)
};

/// r and log_bases are taken from q; beta is ignored.
BetaTable beta_table(const KGraph& g, const Query& q);

std::string kind_name(BetaSet::Kind kind);

}  // namespace kgraph

#endif  // KGRAPH_KMS_HPP
