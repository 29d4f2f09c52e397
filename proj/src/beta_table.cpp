#include "kgraph/errors.hpp"
#include "kgraph/kms.hpp"
#include "kms_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace kgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTolerance = 1e-9;

std::string format_real(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

std::optional<Rational> as_rational(double x) {
  for (std::int64_t den = 1; den <= 64; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(num / static_cast<double>(den) - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
      Rational out{static_cast<std::int64_t>(num), den};
      const std::int64_t g = std::gcd(out.num, out.den);
      out.num /= g;
      out.den /= g;
      return out;
    }
  }
  return std::nullopt;
}

// ln(rho) / ln(a) in exact form where possible.
std::string log_ratio(double rho, const Rational& a) {
  const double value = std::log(rho) / std::log(a.value());
  const auto base = as_rational(rho);
  if (!base) return format_real(value);
  const double lr = std::log(base->value()), la = std::log(a.value());
  for (int q = 1; q <= 12; ++q) {
    for (int p = -12; p <= 12; ++p) {
      if (std::abs(q * lr - p * la) <= 1e-12 * std::max(1.0, std::abs(q * lr))) {
        const int g = std::gcd(std::abs(p), q);
        return Rational{p / g, q / g}.str();
      }
    }
  }
  return "ln(" + base->str() + ")/ln(" + a.str() + ")";
}

struct Bound {
  double value;
  std::optional<std::string> expr;
};

BetaSet solve_row(const SubharmonicCheck& check, const Query& q) {
  BetaSet out;
  if (!check.dominant) return out;
  const SubharmonicComponent& sc = check.component;
  const int k = q.rank();
  auto expr_for = [&](int i, double rho) -> std::optional<std::string> {
    if (!q.log_bases) return std::nullopt;
    return log_ratio(rho, (*q.log_bases)[i]);
  };

  std::optional<Bound> point;
  for (int i : sc.I.colors()) {
    const double rho = sc.rho_C[i];
    if (rho <= 1e-12) return out;
    if (q.r[i] == 0.0) {
      if (std::abs(rho - 1.0) > kTolerance) return out;
      continue;
    }
    const double beta = std::log(rho) / q.r[i];
    if (!point) {
      point = Bound{beta, expr_for(i, rho)};
    } else if (std::abs(beta - point->value) > kTolerance * std::max(1.0, std::abs(point->value))) {
      return out;
    }
  }

  std::optional<Bound> lo, hi;
  std::vector<int> constrained;
  for (int j = 0; j < k; ++j) {
    if (sc.I.contains(j)) continue;
    const double rho = sc.rho_closure[j];
    if (rho <= 1e-12) continue;
    if (q.r[j] == 0.0) {
      if (!(rho < 1.0 - kTolerance)) return out;
      continue;
    }
    constrained.push_back(j);
    const Bound b{std::log(rho) / q.r[j], expr_for(j, rho)};
    if (q.r[j] > 0) {
      if (!lo || b.value > lo->value) lo = b;
    } else {
      if (!hi || b.value < hi->value) hi = b;
    }
  }

  if (point) {
    for (int j : constrained) {
      const double w = std::exp(point->value * q.r[j]);
      if (!(sc.rho_closure[j] < w - kTolerance * std::max(1.0, w))) return out;
    }
    out.kind = BetaSet::Kind::point;
    out.lo = out.hi = point->value;
    out.lo_expr = out.hi_expr = point->expr;
    return out;
  }
  if (!lo && !hi) {
    out.kind = BetaSet::Kind::all;
    out.lo = -kInf;
    out.hi = kInf;
    return out;
  }
  out.lo = lo ? lo->value : -kInf;
  out.hi = hi ? hi->value : kInf;
  if (out.lo >= out.hi) {
    out.lo = out.hi = 0;
    return out;
  }
  out.kind = BetaSet::Kind::interval;
  if (lo) out.lo_expr = lo->expr;
  if (hi) out.hi_expr = hi->expr;
  return out;
}

}  // namespace

bool BetaSet::contains(double beta) const {
  switch (kind) {
    case Kind::empty:
      return false;
    case Kind::point:
      return std::abs(beta - lo) <= kTolerance * std::max(1.0, std::abs(lo));
    case Kind::interval:
      return lo < beta && beta < hi;
    case Kind::all:
      return true;
  }
  return false;
}

std::string kind_name(BetaSet::Kind kind) {
  switch (kind) {
    case BetaSet::Kind::empty:
      return "empty";
    case BetaSet::Kind::point:
      return "point";
    case BetaSet::Kind::interval:
      return "interval";
    case BetaSet::Kind::all:
      return "all";
  }
  return "empty";
}

BetaTable beta_table(const KGraph& g, const Query& q) {
  if (q.rank() != g.rank())
    throw DimensionError("r has " + std::to_string(q.rank()) + " entries but the graph has " +
                         std::to_string(g.rank()) + " colours");
  BetaTable table;
  table.r = q.r;
  table.log_bases = q.log_bases;
  const std::vector<ComponentPartition> parts = detail::all_partitions(g);
  // Only the beta-independent part of the check is used below.
  Query probe = Query::from_r(1.0, q.r);
  for (std::uint32_t mask = 0; mask < parts.size(); ++mask) {
    for (const VertexSet& C : parts[mask].classes) {
      const SubharmonicCheck check = detail::check_component(g, parts[mask], parts.back(), C, probe);
      table.rows.push_back({ColorSet::from_mask(mask), C, solve_row(check, q)});
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const BetaRow& a, const BetaRow& b) {
    return component_less(a.I, a.C, b.I, b.C);
  });
  return table;
}

}  // namespace kgraph
