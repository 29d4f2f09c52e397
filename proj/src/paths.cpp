#include "kgraph/errors.hpp"
#include "kgraph/graph.hpp"

namespace kgraph {

namespace {

void require_factorisation(const KGraph& g, const char* op) {
  if (g.matrices_only())
    throw MatricesOnlyError(std::string(op) + " needs edges and factorisation squares");
}

Degree degree_of(const KGraph& g, const std::vector<int>& word) {
  Degree d(static_cast<std::size_t>(g.rank()));
  for (int e : word) d[g.edge(e).color] += 1;
  return d;
}

Path from_word(const KGraph& g, int range, std::vector<int> word) {
  Path p;
  p.range = word.empty() ? range : g.edge(word.front()).range;
  p.source = word.empty() ? range : g.edge(word.back()).source;
  p.degree = degree_of(g, word);
  p.word = std::move(word);
  return p;
}

std::vector<int> color_sequence(const Degree& d) {
  std::vector<int> out;
  for (std::size_t c = 0; c < d.rank(); ++c)
    for (int t = 0; t < d[c]; ++t) out.push_back(static_cast<int>(c));
  return out;
}

// Rewrites `word` with squares so that its first edges have the colours
// listed in `head`.
void bring_to_front(const KGraph& g, std::vector<int>& word, const std::vector<int>& head) {
  for (std::size_t pos = 0; pos < head.size(); ++pos) {
    std::size_t j = pos;
    while (g.edge(word[j]).color != head[pos]) ++j;
    for (; j > pos; --j) std::tie(word[j - 1], word[j]) = g.swap(word[j - 1], word[j]);
  }
}

}  // namespace

Path vertex_path(const KGraph& g, int v) {
  if (v < 0 || v >= g.vertex_count()) throw RangeError("vertex index out of range");
  Path p;
  p.range = p.source = v;
  p.degree = Degree(static_cast<std::size_t>(g.rank()));
  return p;
}

Path edge_path(const KGraph& g, int e) {
  return from_word(g, g.edge(e).range, {e});
}

Path make_path(const KGraph& g, std::span<const std::string> edge_ids) {
  if (edge_ids.empty()) throw RangeError("a path needs at least one edge");
  std::vector<int> word;
  for (const auto& id : edge_ids) {
    auto e = g.find_edge(id);
    if (!e) throw RangeError("unknown edge '" + id + "'");
    word.push_back(*e);
  }
  bool mixed = false;
  for (int e : word) mixed = mixed || g.edge(e).color != g.edge(word.front()).color;
  if (mixed) require_factorisation(g, "make_path");
  const int range = g.edge(word.front()).range;
  return from_word(g, range, g.normalize(std::move(word)));
}

Path compose(const KGraph& g, const Path& p, const Path& q) {
  require_factorisation(g, "compose");
  if (p.source != q.range)
    throw ComposabilityError("source of the first path (" + g.vertex_id(p.source) +
                             ") is not the range of the second (" + g.vertex_id(q.range) + ")");
  std::vector<int> word = p.word;
  word.insert(word.end(), q.word.begin(), q.word.end());
  return from_word(g, p.range, g.normalize(std::move(word)));
}

Path segment(const KGraph& g, const Path& p, const Degree& m, const Degree& n) {
  require_factorisation(g, "segment");
  if (m.rank() != p.degree.rank() || n.rank() != p.degree.rank() || !m.leq(n) ||
      !n.leq(p.degree))
    throw RangeError("segment bounds must satisfy 0 <= m <= n <= d(p)");
  std::vector<int> word = p.word;
  bring_to_front(g, word, color_sequence(m));
  const auto lead = static_cast<std::ptrdiff_t>(m.total());
  const int start = lead == 0 ? p.range : g.edge(word[lead - 1]).source;
  std::vector<int> rest(word.begin() + lead, word.end());
  bring_to_front(g, rest, color_sequence(n - m));
  rest.resize(static_cast<std::size_t>((n - m).total()));
  return from_word(g, start, std::move(rest));
}

bool for_each_path(const KGraph& g, int v, const Degree& n,
                   const std::function<bool(const Path&)>& visit,
                   const std::vector<bool>* allowed) {
  require_factorisation(g, "enumerate_paths");
  if (allowed && !(*allowed)[v]) return true;
  const std::vector<int> colors = color_sequence(n);
  std::vector<int> word;
  word.reserve(colors.size());
  std::function<bool(int)> walk = [&](int at) -> bool {
    if (word.size() == colors.size()) return visit(from_word(g, v, word));
    for (int e : g.edges_into(at, colors[word.size()])) {
      const int next = g.edge(e).source;
      if (allowed && !(*allowed)[next]) continue;
      word.push_back(e);
      const bool go_on = walk(next);
      word.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  return walk(v);
}

std::vector<Path> enumerate_paths(const KGraph& g, int v, const Degree& n) {
  std::vector<Path> out;
  for_each_path(g, v, n, [&](const Path& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

std::int64_t count_paths(const KGraph& g, int v, const Degree& n) {
  return vertex_matrix(g, n).row(v).sum();
}

std::vector<std::pair<Path, Path>> lambda_min(const KGraph& g, const Path& p, const Path& q) {
  require_factorisation(g, "lambda_min");
  std::vector<std::pair<Path, Path>> out;
  if (p.range != q.range) return out;
  const Degree top = join(p.degree, q.degree);
  const Degree zero(p.degree.rank());
  for_each_path(g, p.source, top - p.degree, [&](const Path& kappa) {
    const Path joint = compose(g, p, kappa);
    if (segment(g, joint, zero, q.degree) == q)
      out.emplace_back(kappa, segment(g, joint, q.degree, top));
    return true;
  });
  return out;
}

std::string describe(const KGraph& g, const Path& p) {
  if (p.is_vertex()) return g.vertex_id(p.range);
  std::string out;
  for (int e : p.word) {
    if (!out.empty()) out += ",";
    out += g.edge(e).id;
  }
  return out;
}

}  // namespace kgraph
