#include "kgraph/query.hpp"

#include "kgraph/errors.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace kgraph {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t out = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty())
    throw SchemaError("malformed number '" + std::string(whole) + "'");
  return out;
}

}  // namespace

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw SchemaError("empty number");
  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    out.num = parse_int(text.substr(0, slash), text);
    out.den = parse_int(text.substr(slash + 1), text);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) throw SchemaError("too many decimals in '" + std::string(text) + "'");
    digits += frac;
    if (digits.empty() || digits == "-" || digits == "+")
      throw SchemaError("malformed number '" + std::string(text) + "'");
    out.num = parse_int(digits.front() == '+' ? std::string_view(digits).substr(1) : digits, text);
    out.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) out.den *= 10;
  } else {
    out.num = parse_int(text.front() == '+' ? text.substr(1) : text, text);
  }
  if (out.den == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  if (out.den < 0) {
    out.num = -out.num;
    out.den = -out.den;
  }
  const std::int64_t g = std::gcd(out.num, out.den);
  if (g > 1) {
    out.num /= g;
    out.den /= g;
  }
  return out;
}

double parse_real(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return Rational::parse(text).value();
  double out = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(out))
    throw SchemaError("malformed number '" + std::string(text) + "'");
  return out;
}

Query Query::from_log_bases(double beta, std::vector<Rational> bases) {
  Query q;
  q.beta = beta;
  for (const Rational& a : bases) {
    if (a.num <= 0) throw SchemaError("log bases must be positive, got " + a.str());
    q.r.push_back(std::log(a.value()));
  }
  q.log_bases = std::move(bases);
  return q;
}

Query Query::from_r(double beta, std::vector<double> r) {
  Query q;
  q.beta = beta;
  q.r = std::move(r);
  return q;
}

double Query::weight(int i) const { return std::exp(beta * r[i]); }

double Query::decay(int i) const { return std::exp(-beta * r[i]); }

Query Query::effective() const {
  if (beta != 0.0) return *this;
  Query q;
  q.beta = 1.0;
  q.r.assign(r.size(), 0.0);
  q.log_bases = std::vector<Rational>(r.size(), Rational{1, 1});
  return q;
}

}  // namespace kgraph
