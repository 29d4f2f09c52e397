#ifndef KGRAPH_QUERY_HPP
#define KGRAPH_QUERY_HPP

// Dynamics parameters (beta, r) and exact rational input.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgraph {

/// A positive or signed rational parsed from "p", "p/q" or a finite decimal.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  /// Throws SchemaError on malformed text.
  static Rational parse(std::string_view text);
};

/// Parses "p/q" or a decimal into a double. Throws SchemaError.
double parse_real(std::string_view text);

struct Query {
  double beta = 1.0;
  std::vector<double> r;
  /// When set, r_i = ln(log_bases[i]); used for exact beta expressions.
  std::optional<std::vector<Rational>> log_bases;

  /// r_i = ln(a_i) for each base a_i > 0. Throws SchemaError.
  static Query from_log_bases(double beta, std::vector<Rational> bases);
  static Query from_r(double beta, std::vector<double> r);

  int rank() const { return static_cast<int>(r.size()); }
  /// e^{beta r_i}.
  double weight(int i) const;
  /// e^{-beta r_i}.
  double decay(int i) const;

  /// beta = 0 is answered as beta = 1 with r = 0 (tracial states).
  Query effective() const;
};

}  // namespace kgraph

#endif  // KGRAPH_QUERY_HPP
