#include "kgraph/errors.hpp"
#include "kgraph/kms.hpp"

#include <cstdlib>

namespace kgraph {

namespace {

using Row = std::vector<std::int64_t>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Row-style Hermite normal form of the lattice spanned by `rows`.
std::vector<Row> hermite_basis(std::vector<Row> rows, std::size_t width) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    bool found = false;
    while (true) {
      std::size_t pivot = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 &&
            (pivot == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[pivot][col])))
          pivot = i;
      if (pivot == rows.size()) break;
      found = true;
      std::swap(rows[r], rows[pivot]);
      bool cleared = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const std::int64_t q = rows[i][col] / rows[r][col];
        for (std::size_t j = 0; j < width; ++j) rows[i][j] -= q * rows[r][j];
        cleared = cleared && rows[i][col] == 0;
      }
      if (cleared) break;
    }
    if (!found) continue;
    if (rows[r][col] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      const std::int64_t q = floor_div(rows[i][col], rows[r][col]);
      for (std::size_t j = 0; j < width; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

}  // namespace

std::optional<std::vector<int>> PeriodicityGroup::coordinates(const std::vector<int>& p) const {
  std::vector<std::int64_t> rest(p.begin(), p.end());
  std::vector<int> out;
  for (const auto& gen : generators) {
    std::size_t pivot = 0;
    while (pivot < gen.size() && gen[pivot] == 0) ++pivot;
    if (pivot == gen.size() || pivot >= rest.size()) return std::nullopt;
    if (rest[pivot] % gen[pivot] != 0) return std::nullopt;
    const std::int64_t c = rest[pivot] / gen[pivot];
    for (std::size_t j = 0; j < gen.size(); ++j) rest[j] -= c * gen[j];
    out.push_back(static_cast<int>(c));
  }
  for (auto x : rest)
    if (x != 0) return std::nullopt;
  return out;
}

PeriodicityGroup periodicity_group(const KGraph& g, const VertexSet& C, ColorSet I, int bound) {
  PeriodicityGroup out;
  out.I = I;
  out.search_bound = bound;
  if (I.empty()) return out;
  if (g.matrices_only())
    throw MatricesOnlyError("the periodicity group needs factorisation squares");
  if (bound < 1) throw RangeError("period search bound must be positive");
  const ComponentPartition part = components(g, I);
  if (!part.find_class(C)) throw NotAClassError("vertex set is not an equivalence class");

  const auto k = static_cast<std::size_t>(g.rank());
  std::vector<bool> inside(static_cast<std::size_t>(g.vertex_count()), false);
  for (int v : C) inside[v] = true;
  for (int v : C) {
    for (int i : I.colors()) {
      bool receives = false;
      for (int e : g.edges_into(v, i)) receives = receives || inside[g.edge(e).source];
      if (!receives)
        throw CertificationError("vertex " + g.vertex_id(v) + " receives no colour-" +
                                 std::to_string(i + 1) + " edge from inside the class");
    }
  }

  const std::vector<int> colors = I.colors();
  auto passes = [&](const std::vector<int>& p) {
    Degree plus(k), minus(k);
    for (std::size_t c = 0; c < k; ++c) {
      plus[c] = std::max(p[c], 0);
      minus[c] = std::max(-p[c], 0);
    }
    for (int i : colors) {
      const Degree unit = Degree::unit(k, i);
      const Degree total = plus + minus + unit;
      for (int v : C) {
        const bool ok = for_each_path(
            g, v, total,
            [&](const Path& lambda) {
              return segment(g, lambda, plus, plus + unit) ==
                     segment(g, lambda, minus, minus + unit);
            },
            &inside);
        if (!ok) return false;
      }
    }
    return true;
  };

  // Candidates up to sign: the criterion is symmetric under p -> -p.
  std::vector<Row> passing;
  std::vector<int> offsets(colors.size(), -bound);
  while (true) {
    std::vector<int> p(k, 0);
    for (std::size_t t = 0; t < colors.size(); ++t) p[colors[t]] = offsets[t];
    std::size_t lead = 0;
    while (lead < colors.size() && offsets[lead] == 0) ++lead;
    if (lead < colors.size() && offsets[lead] > 0 && passes(p))
      passing.emplace_back(p.begin(), p.end());
    std::size_t t = 0;
    while (t < offsets.size() && offsets[t] == bound) offsets[t++] = -bound;
    if (t == offsets.size()) break;
    ++offsets[t];
  }
  for (const Row& row : hermite_basis(std::move(passing), k))
    out.generators.emplace_back(row.begin(), row.end());
  out.complete = false;
  return out;
}

}  // namespace kgraph
