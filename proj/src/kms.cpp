#include "kgraph/kms.hpp"

#include "kgraph/errors.hpp"
#include "kms_internal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

namespace kgraph {

namespace {

constexpr double kCriticalTolerance = 1e-9;
constexpr double kMassTolerance = 1e-9;

double relative_slack(double value) { return kCriticalTolerance * std::max(1.0, value); }

double restricted_radius(const KGraph& g, int color, const VertexSet& set) {
  return spectral_radius(restrict_to(to_real(g.matrix(color)), set));
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void require_dimension(const KGraph& g, const Query& q) {
  if (q.rank() != g.rank())
    throw DimensionError("r has " + std::to_string(q.rank()) + " entries but the graph has " +
                         std::to_string(g.rank()) + " colours");
}

void require_vector(const KGraph& g, const VertexVector& psi) {
  if (psi.size() != g.vertex_count())
    throw DimensionError("vector has " + std::to_string(psi.size()) + " entries but the graph has " +
                         std::to_string(g.vertex_count()) + " vertices");
}

}  // namespace

namespace detail {

std::string render_set(const KGraph& g, const VertexSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) out += (i ? "," : "") + g.vertex_id(set[i]);
  return out + "}";
}

SubharmonicCheck check_component(const KGraph& g, const ComponentPartition& part,
                                 const ComponentPartition& full, const VertexSet& C,
                                 const Query& q) {
  const ColorSet I = part.colors;
  if (!part.find_class(C))
    throw NotAClassError(render_set(g, C) + " is not an equivalence class for the colours given");
  SubharmonicCheck out;
  SubharmonicComponent& sc = out.component;
  sc.C = C;
  sc.I = I;
  sc.closure_I = closure(part, C);
  sc.closure_full = closure(full, C);
  for (int i = 0; i < g.rank(); ++i) {
    sc.rho_C.push_back(restricted_radius(g, i, C));
    sc.rho_closure.push_back(restricted_radius(g, i, sc.closure_full));
  }
  std::ostringstream why;
  for (const VertexSet& D : part.classes) {
    if (D == C || !is_subset(D, sc.closure_I)) continue;
    sc.dominated.push_back(D);
    bool below_everywhere = true, strictly_somewhere = false;
    for (int i : I.colors()) {
      const double rho_d = restricted_radius(g, i, D);
      const double tol = relative_slack(sc.rho_C[i]);
      below_everywhere = below_everywhere && rho_d <= sc.rho_C[i] + tol;
      strictly_somewhere = strictly_somewhere || rho_d < sc.rho_C[i] - tol;
    }
    if (!(below_everywhere && strictly_somewhere) && out.reason.empty()) {
      out.dominant = false;
      out.reason = "class " + render_set(g, D) + " in the closure is not strictly dominated";
    }
  }
  if (out.reason.empty()) {
    for (int i = 0; i < g.rank(); ++i) {
      const double w = q.weight(i);
      if (I.contains(i) && std::abs(sc.rho_C[i] - w) > relative_slack(w)) {
        why << "rho(A_" << i + 1 << ") on the class is " << sc.rho_C[i] << ", not e^(beta r_"
            << i + 1 << ") = " << w;
        out.reason = why.str();
        break;
      }
      if (!I.contains(i) && !(sc.rho_closure[i] < w - relative_slack(w))) {
        why << "rho(A_" << i + 1 << ") on the closure is " << sc.rho_closure[i]
            << ", not below e^(beta r_" << i + 1 << ") = " << w;
        out.reason = why.str();
        break;
      }
    }
  }
  out.pass = out.reason.empty();
  return out;
}

std::vector<ComponentPartition> all_partitions(const KGraph& g) {
  std::vector<ComponentPartition> out;
  for (std::uint32_t mask = 0; mask < (1u << g.rank()); ++mask)
    out.push_back(components(g, ColorSet::from_mask(mask)));
  return out;
}

}  // namespace detail

bool component_less(ColorSet I1, const VertexSet& C1, ColorSet I2, const VertexSet& C2) {
  if (I1 != I2) return color_set_less(I1, I2);
  return C1 < C2;
}

SubharmonicCheck is_subharmonic(const KGraph& g, const VertexSet& C, ColorSet I,
                                const Query& q) {
  require_dimension(g, q);
  return detail::check_component(g, components(g, I), components(g, ColorSet::all(g.rank())), C,
                         q.effective());
}

std::vector<SubharmonicComponent> find_subharmonic(const KGraph& g, const Query& q,
                                                   int threads) {
  require_dimension(g, q);
  const Query eff = q.effective();
  const std::vector<ComponentPartition> parts = detail::all_partitions(g);
  struct Task {
    std::uint32_t mask;
    VertexSet C;
  };
  std::vector<Task> tasks;
  for (std::uint32_t mask = 0; mask < parts.size(); ++mask)
    for (const VertexSet& C : parts[mask].classes) tasks.push_back({mask, C});
  std::vector<std::optional<SubharmonicComponent>> found(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    SubharmonicCheck check =
        detail::check_component(g, parts[tasks[t].mask], parts.back(), tasks[t].C, eff);
    if (check) found[t] = std::move(check.component);
  });
  std::vector<SubharmonicComponent> out;
  for (auto& f : found)
    if (f) out.push_back(std::move(*f));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return component_less(a.I, a.C, b.I, b.C);
  });
  return out;
}

MatrixFamily scaled_family(const KGraph& g, const Query& q) {
  require_dimension(g, q);
  const Query eff = q.effective();
  MatrixFamily out;
  for (int i = 0; i < g.rank(); ++i) out.push_back(eff.decay(i) * to_real(g.matrix(i)));
  return out;
}

VertexVector harmonic_vector(const KGraph& g, const SubharmonicComponent& sc, const Query& q) {
  const Query eff = q.effective();
  const SubharmonicCheck check = is_subharmonic(g, sc.C, sc.I, eff);
  if (!check)
    throw CertificationError(detail::render_set(g, sc.C) + " is not subharmonic: " + check.reason);
  const SubharmonicComponent& cert = check.component;
  const Eigen::Index n = g.vertex_count();
  if (cert.I.empty()) {
    VertexVector x = VertexVector::Zero(n);
    x(cert.C.front()) = 1.0;
    return x;
  }
  const VertexSet& S = cert.closure_I;
  MatrixFamily mats;
  std::vector<double> lambdas;
  for (int i : cert.I.colors()) {
    mats.push_back(restrict_to(to_real(g.matrix(i)), S));
    lambdas.push_back(cert.rho_C[i]);
  }
  const Eigen::MatrixXd kernel = joint_kernel(mats, lambdas);
  auto found = nonnegative_point_in_span(kernel);
  std::ostringstream diag;
  diag << "joint eigenspace on " << detail::render_set(g, S) << " has dimension " << kernel.cols();
  if (!found) throw DegenerateKernelError(diag.str() + " and no nonnegative unit vector");
  const VertexVector& xs = *found;
  for (std::size_t t = 0; t < mats.size(); ++t) {
    const double err = (mats[t] * xs - lambdas[t] * xs).cwiseAbs().maxCoeff();
    if (err > 1e-8 * std::max(1.0, lambdas[t]))
      throw DegenerateKernelError(diag.str() + "; eigen relation error " + std::to_string(err));
  }
  if (xs.minCoeff() <= 1e-13)
    throw DegenerateKernelError(diag.str() + "; vector vanishes somewhere on the closure");
  return extend_from(xs, S, n);
}

KmsVectors kms_vector(const KGraph& g, const SubharmonicComponent& sc, const Query& q) {
  const Query eff = q.effective();
  KmsVectors out;
  out.x = harmonic_vector(g, sc, eff);
  const VertexSet bar = closure(g, sc.C, ColorSet::all(g.rank()));
  MatrixFamily family;
  for (int j = 0; j < g.rank(); ++j)
    if (!sc.I.contains(j))
      family.push_back(eff.decay(j) * restrict_to(to_real(g.matrix(j)), bar));
  out.xtilde = extend_from(neumann_sum(family, restrict_to(out.x, bar)), bar, g.vertex_count());
  out.y = out.xtilde / out.xtilde.sum();
  return out;
}

VertexVector boundary_vector(const KGraph& g, const VertexVector& psi, ColorSet I,
                             const Query& q) {
  require_vector(g, psi);
  const Query eff = q.effective();
  VertexVector x = psi;
  for (int j = 0; j < g.rank(); ++j)
    if (!I.contains(j)) x = x - eff.decay(j) * (to_real(g.matrix(j)) * x);
  const double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
  Eigen::Index at = 0;
  if (x.size() > 0 && x.minCoeff(&at) < -kMassTolerance * scale) {
    std::ostringstream msg;
    msg << "boundary mass " << x(at) << " at vertex " << g.vertex_id(static_cast<int>(at));
    throw NegativeMassError(msg.str());
  }
  return x.cwiseMax(0.0);
}

std::vector<WeightedComponent> decompose_kms(const KGraph& g, const VertexVector& psi,
                                             const Query& q) {
  require_vector(g, psi);
  const Query eff = q.effective();
  const MatrixFamily family = scaled_family(g, eff);
  if (std::abs(psi.sum() - 1.0) > 1e-9 || psi.minCoeff() < -1e-12)
    throw NotSubinvariantError("vector must be nonnegative with unit 1-norm");
  const std::vector<VertexVector> pieces = decompose_subinvariant(family, psi);
  const std::vector<ComponentPartition> parts = detail::all_partitions(g);
  std::vector<WeightedComponent> out;
  for (std::uint32_t mask = 0; mask < pieces.size(); ++mask) {
    if (pieces[mask].cwiseAbs().maxCoeff() <= 1e-12) continue;
    const ColorSet I = ColorSet::from_mask(mask);
    const ComponentPartition& part = parts[mask];
    VertexVector rest = boundary_vector(g, pieces[mask], I, eff);
    // Peel classes maximal first: C goes before every D with D <=_I C.
    std::vector<char> used(part.classes.size(), 0);
    for (std::size_t step = 0; step < part.classes.size(); ++step) {
      std::size_t pick = part.classes.size();
      for (std::size_t c = 0; c < part.classes.size() && pick == part.classes.size(); ++c) {
        if (used[c]) continue;
        bool maximal = true;
        for (std::size_t d = 0; d < part.classes.size() && maximal; ++d)
          if (!used[d] && d != c && part.leq(part.classes[c][0], part.classes[d][0]))
            maximal = false;
        if (maximal) pick = c;
      }
      used[pick] = 1;
      const VertexSet& C = part.classes[pick];
      double mass = 0;
      for (int v : C) mass += rest(v);
      if (mass <= 1e-12) continue;
      SubharmonicCheck check = detail::check_component(g, part, parts.back(), C, eff);
      if (!check) continue;
      const KmsVectors vec = kms_vector(g, check.component, eff);
      double base = 0;
      for (int v : C) base += vec.x(v);
      const double t = mass / base;
      rest -= t * vec.x;
      const double weight = t * vec.xtilde.sum();
      if (weight > 1e-10) out.push_back({std::move(check.component), weight});
    }
    const double residual = rest.cwiseAbs().maxCoeff();
    if (residual > 1e-7) {
      std::ostringstream msg;
      msg << "peeling left a residual of " << residual << " for colour set mask " << mask;
      throw ResidualError(msg.str());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return component_less(a.component.I, a.component.C, b.component.I, b.component.C);
  });
  return out;
}

bool factors_through_ck(const KGraph& g, const SubharmonicComponent& sc) {
  const ComponentPartition part = components(g, sc.I);
  for (const VertexSet& C : part.classes) {
    if (!is_subset(sc.C, closure(part, C))) continue;
    bool emits = false;
    for (int j = 0; j < g.rank() && !emits; ++j) {
      if (sc.I.contains(j)) continue;
      for (int v : C) emits = emits || g.matrix(j).row(v).sum() > 0;
    }
    if (!emits) return true;
  }
  return false;
}

SimplexDescription simplex(const KGraph& g, const Query& q, const SimplexOptions& options) {
  SimplexDescription out;
  out.query = q;
  const Query eff = q.effective();
  const std::vector<SubharmonicComponent> found = find_subharmonic(g, eff, options.threads);
  out.states.resize(found.size());
  parallel_for(found.size(), options.threads, [&](std::size_t t) {
    const SubharmonicComponent& sc = found[t];
    ExtremeState& st = out.states[t];
    st.component = sc;
    const KmsVectors vec = kms_vector(g, sc, eff);
    st.y = vec.y;
    st.xtilde_norm = vec.xtilde.sum();
    if (sc.I.empty() || !g.matrices_only()) {
      const int bound = options.per_bound.value_or(static_cast<int>(sc.C.size()));
      st.per = periodicity_group(g, sc.C, sc.I, bound);
    }
    st.factors_through_ck = factors_through_ck(g, sc);
  });
  return out;
}

namespace {

StateValue diagonal(const KGraph& g, const VertexVector& psi, const Path& lambda,
                    const Query& eff) {
  double weight = 0;
  for (int i = 0; i < g.rank(); ++i) weight += eff.beta * eff.r[i] * lambda.degree[i];
  return {std::exp(-weight) * psi(lambda.source), false};
}

void require_same_source(const KGraph& g, const Path& lambda, const Path& mu) {
  if (lambda.source != mu.source)
    throw ComposabilityError("S_lambda S_mu^* needs s(lambda) = s(mu), got " +
                             g.vertex_id(lambda.source) + " and " + g.vertex_id(mu.source));
}

}  // namespace

StateValue state_eval(const KGraph& g, const VertexVector& psi, const Path& lambda,
                      const Path& mu, const Query& q) {
  require_vector(g, psi);
  require_dimension(g, q);
  require_same_source(g, lambda, mu);
  if (lambda == mu) return diagonal(g, psi, lambda, q.effective());
  return {0.0, false};
}

StateValue state_eval(const KGraph& g, const ExtremeState& state, const Path& lambda,
                      const Path& mu, const Query& q) {
  require_vector(g, state.y);
  require_dimension(g, q);
  require_same_source(g, lambda, mu);
  const Query eff = q.effective();
  if (lambda == mu) return diagonal(g, state.y, lambda, eff);
  if (!state.character) return {0.0, false};
  if (!state.per) throw MatricesOnlyError("the periodicity group needs factorisation squares");
  const PeriodicityGroup& per = *state.per;
  if (static_cast<int>(state.character->size()) != per.rank())
    throw DimensionError("character has " + std::to_string(state.character->size()) +
                         " angles but the periodicity group has rank " +
                         std::to_string(per.rank()));
  StateValue out;
  out.incomplete_periodicity = !per.complete;
  std::vector<int> p(g.rank());
  for (int i = 0; i < g.rank(); ++i) {
    p[i] = lambda.degree[i] - mu.degree[i];
    if (p[i] != 0 && !state.component.I.contains(i)) return out;
  }
  auto coords = per.coordinates(p);
  if (!coords) return out;
  double angle = 0;
  for (std::size_t t = 0; t < coords->size(); ++t) angle += (*state.character)[t] * (*coords)[t];
  const Degree top = join(lambda.degree, mu.degree);
  double weight = 0;
  for (int i = 0; i < g.rank(); ++i) weight += eff.beta * eff.r[i] * top[i];
  double mass = 0;
  for (const auto& [kappa, eta] : lambda_min(g, lambda, mu)) mass += state.y(kappa.source);
  out.value = std::polar(std::exp(-weight) * mass, angle);
  return out;
}

}  // namespace kgraph
