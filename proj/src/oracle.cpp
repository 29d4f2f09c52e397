#include "kgraph/oracle.hpp"

#include "kgraph/errors.hpp"
#include "kms_internal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kgraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::next() {
  const std::uint64_t key = splitmix64(seed_) ^ splitmix64(stream_ + 0x632BE59BD9B4E019ull);
  return splitmix64(key + counter_++ * 0x9E3779B97F4A7C15ull);
}

double CounterRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

std::vector<IntMatrix> random_integer_family(std::uint64_t seed, int size, int k) {
  CounterRng rng(seed, 0);
  IntMatrix m(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      const auto draw = rng.below(4);
      m(a, b) = draw < 2 ? 0 : static_cast<std::int64_t>(draw - 1);
    }
  const IntMatrix m2 = m * m;
  const IntMatrix id = IntMatrix::Identity(size, size);
  std::vector<IntMatrix> out;
  for (int i = 0; i < k; ++i) {
    auto c0 = static_cast<std::int64_t>(rng.below(4));
    auto c1 = static_cast<std::int64_t>(rng.below(4));
    auto c2 = static_cast<std::int64_t>(rng.below(4));
    if (c0 == 0 && c1 == 0 && c2 == 0) c1 = 1;
    out.push_back(c0 * id + c1 * m + c2 * m2);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (out[i] * out[j] != out[j] * out[i])
        throw GenerationError("generated matrices do not commute");
  return out;
}

MatrixFamily random_commuting_family(std::uint64_t seed, int size, int k) {
  MatrixFamily out;
  for (const IntMatrix& m : random_integer_family(seed, size, k)) out.push_back(to_real(m));
  return out;
}

MatrixFamily normalize_family(std::uint64_t seed, const MatrixFamily& family) {
  static constexpr double kScales[] = {1.0, 1.0, 1.5, 2.5};
  CounterRng rng(seed, 1);
  MatrixFamily out;
  for (const auto& b : family) {
    const double scale = kScales[rng.below(4)];
    const double rho = spectral_radius(b);
    out.push_back(rho > 1e-12 ? Eigen::MatrixXd(b / (rho * scale)) : b);
  }
  return out;
}

namespace {

// Nonnegative joint eigenvectors with every eigenvalue at most 1, one per
// strongly connected class of the combined support where one exists.
std::vector<VertexVector> eigen_pieces(const MatrixFamily& family) {
  const Eigen::Index n = family.front().rows();
  Eigen::MatrixXd support = Eigen::MatrixXd::Zero(n, n);
  for (const auto& b : family) support += b;
  const int size = static_cast<int>(n);
  std::vector<std::vector<char>> reach(size, std::vector<char>(size, 0));
  for (int v = 0; v < size; ++v) {
    reach[v][v] = 1;
    for (int w = 0; w < size; ++w)
      if (support(v, w) > 0) reach[v][w] = 1;
  }
  for (int via = 0; via < size; ++via)
    for (int v = 0; v < size; ++v)
      if (reach[v][via])
        for (int w = 0; w < size; ++w)
          if (reach[via][w]) reach[v][w] = 1;

  std::vector<VertexVector> out;
  for (const VertexSet& cls : strong_components(support)) {
    VertexSet below;
    for (int w = 0; w < size; ++w)
      for (int c : cls)
        if (reach[w][c]) {
          below.push_back(w);
          break;
        }
    MatrixFamily mats;
    std::vector<double> lambdas;
    bool admissible = true;
    for (const auto& b : family) {
      const double lambda = spectral_radius(restrict_to(b, cls));
      admissible = admissible && lambda <= 1.0 + 1e-12;
      mats.push_back(restrict_to(b, below));
      lambdas.push_back(lambda);
    }
    if (!admissible) continue;
    auto x = nonnegative_point_in_span(joint_kernel(mats, lambdas));
    if (!x) continue;
    bool ok = true;
    for (std::size_t i = 0; i < mats.size(); ++i)
      ok = ok && (mats[i] * *x - lambdas[i] * *x).cwiseAbs().maxCoeff() < 1e-10;
    if (ok) out.push_back(extend_from(*x, below, n));
  }
  return out;
}

}  // namespace

VertexVector random_subinvariant(std::uint64_t seed, const MatrixFamily& family) {
  if (family.empty()) throw GenerationError("empty matrix family");
  const Eigen::Index n = family.front().rows();
  std::vector<VertexVector> pieces = eigen_pieces(family);
  bool subcritical = true;
  for (const auto& b : family) subcritical = subcritical && spectral_radius(b) < 1.0 - 1e-9;
  CounterRng noise(seed, 1);
  if (subcritical) {
    for (int t = 0; t < 3; ++t) {
      VertexVector z(n);
      for (Eigen::Index v = 0; v < n; ++v) z(v) = noise.below(3) == 0 ? 0.0 : noise.uniform01();
      if (z.sum() > 0) pieces.push_back(neumann_sum(family, z));
    }
  }
  if (pieces.empty()) {
    std::ostringstream msg;
    msg << "no nonnegative joint eigenvector with eigenvalues <= 1 for a family of "
        << family.size() << " matrices of size " << n;
    throw GenerationError(msg.str());
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CounterRng rng(seed, 2 + static_cast<std::uint64_t>(attempt));
    VertexVector psi = VertexVector::Zero(n);
    for (const auto& piece : pieces) {
      const double w = rng.below(10) < 3 ? 0.0 : rng.uniform01();
      psi += w * piece / piece.sum();
    }
    if (psi.sum() <= 0) continue;
    psi /= psi.sum();
    if (is_subinvariant(family, psi)) return psi;
  }
  throw GenerationError("1000 draws failed the sub-invariance test");
}

McEstimate mc_cylinder_estimate(const KGraph& g, const ExtremeState& state, const Path& lambda,
                                std::int64_t samples, std::uint64_t seed, const Query& q) {
  if (g.matrices_only()) throw MatricesOnlyError("sampling needs edges and factorisation squares");
  if (samples < 1000) throw RangeError("at least 1000 samples are required");
  const Query eff = q.effective();
  const VertexVector& y = state.y;
  const int start = lambda.range;
  if (!(y(start) > 0) || !(y(lambda.source) > 0))
    throw SupportError("the path leaves the support of the state's vector");
  const int k = g.rank();
  std::vector<int> colors;
  Degree top(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    top[c] = state.component.I.contains(c) ? std::max(8, lambda.degree[c]) : lambda.degree[c];
    for (int t = 0; t < top[c]; ++t) colors.push_back(c);
  }
  const Degree zero(static_cast<std::size_t>(k));
  std::int64_t hits = 0;
  std::vector<int> word;
  for (std::int64_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    word.clear();
    int at = start;
    bool alive = true;
    for (int c : colors) {
      double u = rng.uniform01() * y(at) / eff.decay(c);
      int chosen = -1;
      for (int e : g.edges_into(at, c)) {
        u -= y(g.edge(e).source);
        if (u < 0) {
          chosen = e;
          break;
        }
      }
      if (chosen < 0) {
        alive = false;
        break;
      }
      word.push_back(chosen);
      at = g.edge(chosen).source;
    }
    if (!alive) continue;
    Path sample{start, at, top, word};
    if (segment(g, sample, zero, lambda.degree) == lambda) ++hits;
  }
  McEstimate out;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.standard_error =
      std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  double weight = 0;
  for (int c = 0; c < k; ++c) weight += eff.beta * eff.r[c] * lambda.degree[c];
  out.expected = std::exp(-weight) * y(lambda.source) / y(start);
  return out;
}

bool CheckReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

namespace {

std::string label(const KGraph& g, const SubharmonicComponent& sc) {
  std::string colors = "{";
  for (int c : sc.I.colors()) colors += (colors.size() > 1 ? "," : "") + std::to_string(c + 1);
  return detail::render_set(g, sc.C) + " I=" + colors + "}";
}

// sum_{n <= M} B^n x, with M large enough for the slowest decay.
VertexVector truncated_series(const Eigen::MatrixXd& b, const VertexVector& x) {
  const double rho = spectral_radius(b);
  long terms = 200;
  if (rho > 0 && rho < 1)
    terms = std::clamp(static_cast<long>(std::ceil(std::log(1e-13) / std::log(rho))), 200L,
                       1000000L);
  VertexVector sum = x, term = x;
  for (long n = 1; n <= terms; ++n) {
    term = b * term;
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  return sum;
}

}  // namespace

CheckReport check_suite(const KGraph& g, const Query& q, std::uint64_t seed, int threads) {
  CheckReport report;
  auto add = [&](std::string name, double error, double tolerance, std::string note = {}) {
    report.entries.push_back(
        {std::move(name), error <= tolerance, error, tolerance, seed, std::move(note)});
  };
  const Query eff = q.effective();
  const SimplexDescription sd = simplex(g, q, {std::nullopt, threads});
  const MatrixFamily family = scaled_family(g, eff);
  const int k = g.rank();

  {
    int repeats = 0;
    for (std::size_t a = 0; a < sd.states.size(); ++a)
      for (std::size_t b = a + 1; b < sd.states.size(); ++b)
        if (sd.states[a].component.C == sd.states[b].component.C) ++repeats;
    add("certification_unique", repeats, 0, std::to_string(sd.states.size()) + " states");
  }

  for (const ExtremeState& st : sd.states) {
    const SubharmonicComponent& sc = st.component;
    const std::string tag = " " + label(g, sc);
    const KmsVectors vec = kms_vector(g, sc, eff);
    const VertexVector& y = vec.y;

    double support_error = std::abs(y.sum() - 1.0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      const bool inside = std::binary_search(sc.closure_full.begin(), sc.closure_full.end(), v);
      if (inside ? !(y(v) > 1e-12) : y(v) != 0.0) support_error = std::max(support_error, 1.0);
    }
    add("y_properties" + tag, support_error, 1e-9);

    const SubinvarianceCheck sub = is_subinvariant(family, y);
    add("subinvariant" + tag, sub.pass ? 0.0 : -sub.value, 1e-9);

    const VertexVector boundary = boundary_vector(g, y, sc.I, eff);
    add("boundary_recovery" + tag,
        (boundary - vec.x / vec.xtilde.sum()).cwiseAbs().maxCoeff(), 1e-8);

    double eigen_error = 0;
    for (int i = 0; i < k; ++i) {
      if (sc.I.contains(i)) {
        const double w = eff.weight(i);
        eigen_error = std::max(eigen_error,
                               (to_real(g.matrix(i)) * y - w * y).cwiseAbs().maxCoeff() /
                                   std::max(1.0, w));
      } else {
        eigen_error = std::max(eigen_error,
                               riesz_split(family[i], y).invariant.cwiseAbs().maxCoeff());
      }
    }
    add("eigen_relations" + tag, eigen_error, 1e-8);

    VertexVector series = boundary;
    for (int j = 0; j < k; ++j)
      if (!sc.I.contains(j)) series = truncated_series(family[j], series);
    add("neumann_identity" + tag, (series - y).cwiseAbs().maxCoeff(), 1e-6);
  }

  if (sd.states.empty()) {
    add("roundtrip", 0, 1e-8, "no extreme states");
  } else {
    CounterRng rng(seed, 1);
    std::vector<double> weights;
    for (std::size_t t = 0; t < sd.states.size(); ++t) weights.push_back(0.05 + rng.uniform01());
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    VertexVector psi = VertexVector::Zero(g.vertex_count());
    for (std::size_t t = 0; t < sd.states.size(); ++t) {
      weights[t] /= total;
      psi += weights[t] * sd.states[t].y;
    }
    psi /= psi.sum();
    double error = 0;
    std::string note;
    try {
      const auto found = decompose_kms(g, psi, eff);
      std::vector<double> recovered(sd.states.size(), 0.0);
      for (const auto& wc : found) {
        bool matched = false;
        for (std::size_t t = 0; t < sd.states.size(); ++t) {
          if (sd.states[t].component.C == wc.component.C &&
              sd.states[t].component.I == wc.component.I) {
            recovered[t] = wc.weight;
            matched = true;
          }
        }
        if (!matched) error = std::max(error, wc.weight);
      }
      for (std::size_t t = 0; t < weights.size(); ++t)
        error = std::max(error, std::abs(recovered[t] - weights[t]));
    } catch (const Error& e) {
      error = 1.0;
      note = e.code() + ": " + e.what();
    }
    add("roundtrip", error, 1e-8, note);

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    const auto reference = decompose_subinvariant(family, psi, order);
    double spread = 0;
    while (std::next_permutation(order.begin(), order.end())) {
      const auto other = decompose_subinvariant(family, psi, order);
      for (std::size_t m = 0; m < reference.size(); ++m)
        spread = std::max(spread, (reference[m] - other[m]).cwiseAbs().maxCoeff());
    }
    add("order_permutation", spread, 1e-8);
  }

  if (g.matrices_only()) {
    add("tck_consistency", 0, 0, "skipped: no factorisation squares");
    add("monte_carlo", 0, 0, "skipped: no factorisation squares");
    return report;
  }

  std::vector<Path> paths;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Degree d(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) d[c] = (mask >> c) & 1u;
    for (int v = 0; v < g.vertex_count() && paths.size() < 400; ++v)
      for (Path& p : enumerate_paths(g, v, d)) paths.push_back(std::move(p));
  }
  for (const ExtremeState& base : sd.states) {
    std::vector<ExtremeState> variants{base};
    if (base.per && base.per->rank() > 0) {
      ExtremeState twisted = base;
      twisted.character = std::vector<double>();
      for (int t = 0; t < base.per->rank(); ++t) twisted.character->push_back(0.7 * (t + 1));
      variants.push_back(std::move(twisted));
    }
    double error = 0;
    for (const ExtremeState& st : variants) {
      for (const Path& lam : paths) {
        for (const Path& mu : paths) {
          if (lam.source != mu.source) continue;
          const std::complex<double> lhs = state_eval(g, st, lam, mu, eff).value;
          std::complex<double> rhs = 0;
          for (const auto& [kappa, eta] : lambda_min(g, mu, lam))
            rhs += state_eval(g, st, kappa, eta, eff).value;
          double weight = 0;
          for (int c = 0; c < k; ++c) weight += eff.beta * eff.r[c] * lam.degree[c];
          error = std::max(error, std::abs(lhs - std::exp(-weight) * rhs));
        }
      }
    }
    add("tck_consistency " + label(g, base.component), error, 1e-9);

    const Path* pick = nullptr;
    std::vector<Path> edges;
    for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) edges.push_back(edge_path(g, e));
    for (const Path& e : edges) {
      if (base.y(e.range) > 0 && base.y(e.source) > 0 &&
          std::binary_search(base.component.C.begin(), base.component.C.end(), e.range)) {
        pick = &e;
        break;
      }
    }
    if (!pick) {
      add("monte_carlo " + label(g, base.component), 0, 0, "no edge inside the support");
      continue;
    }
    const std::int64_t samples = 10000;
    const McEstimate mc = mc_cylinder_estimate(g, base, *pick, samples, seed, eff);
    const double sigma =
        std::sqrt(mc.expected * (1.0 - mc.expected) / static_cast<double>(samples));
    add("monte_carlo " + label(g, base.component), std::abs(mc.estimate - mc.expected),
        3.0 * sigma + 1e-12, "edge " + describe(g, *pick));
  }
  return report;
}

}  // namespace kgraph
