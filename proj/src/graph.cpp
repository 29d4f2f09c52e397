#include "kgraph/graph.hpp"

#include "kgraph/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace kgraph {

namespace {

std::uint64_t word_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Sorts ids and returns perm with sorted[i] = input[perm[i]].
std::vector<int> sort_vertices(std::vector<std::string>& ids) {
  std::vector<int> perm(ids.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return ids[a] < ids[b]; });
  std::vector<std::string> sorted;
  sorted.reserve(ids.size());
  for (int i : perm) sorted.push_back(ids[i]);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw SchemaError("duplicate vertex id '" + sorted[i] + "'");
  ids = std::move(sorted);
  return perm;
}

}  // namespace

bool color_set_less(ColorSet a, ColorSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.colors() < b.colors();
}

KGraph KGraph::from_matrices(int k, std::vector<std::string> vertices,
                             const std::vector<IntMatrix>& matrices) {
  if (k < 1) throw SchemaError("k must be a positive integer");
  if (static_cast<int>(matrices.size()) != k)
    throw SchemaError("expected " + std::to_string(k) + " matrices, got " +
                      std::to_string(matrices.size()));
  KGraph g;
  g.k_ = k;
  const auto n = static_cast<Eigen::Index>(vertices.size());
  const std::vector<int> perm = sort_vertices(vertices);
  g.vertices_ = std::move(vertices);
  for (int c = 0; c < k; ++c) {
    const IntMatrix& m = matrices[c];
    if (m.rows() != n || m.cols() != n)
      throw SchemaError("matrix " + std::to_string(c + 1) + " is not " + std::to_string(n) +
                        "x" + std::to_string(n));
    if ((m.array() < 0).any())
      throw SchemaError("matrix " + std::to_string(c + 1) + " has a negative entry");
    IntMatrix sorted(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) sorted(a, b) = m(perm[a], perm[b]);
    g.matrices_.push_back(std::move(sorted));
  }
  g.index_edges();
  g.matrices_only_ = true;
  g.check_commutation();
  return g;
}

KGraph KGraph::from_edges(int k, std::vector<std::string> vertices,
                          const std::vector<EdgeSpec>& edges,
                          std::optional<std::vector<SquareSpec>> squares) {
  if (k < 1) throw SchemaError("k must be a positive integer");
  KGraph g;
  g.k_ = k;
  sort_vertices(vertices);
  g.vertices_ = std::move(vertices);
  std::set<std::string> seen;
  for (const EdgeSpec& spec : edges) {
    if (!seen.insert(spec.id).second) throw SchemaError("duplicate edge id '" + spec.id + "'");
    if (spec.color < 1 || spec.color > k)
      throw SchemaError("edge '" + spec.id + "' has colour " + std::to_string(spec.color) +
                        " outside 1.." + std::to_string(k));
    auto r = g.find_vertex(spec.range);
    auto s = g.find_vertex(spec.source);
    if (!r || !s) throw SchemaError("edge '" + spec.id + "' refers to an unknown vertex");
    g.edges_.push_back(Edge{spec.id, spec.color - 1, *r, *s});
  }
  const auto n = static_cast<Eigen::Index>(g.vertices_.size());
  g.matrices_.assign(k, IntMatrix::Zero(n, n));
  for (const Edge& e : g.edges_) g.matrices_[e.color](e.range, e.source) += 1;
  g.index_edges();
  g.check_commutation();
  g.matrices_only_ = k > 1 && !squares.has_value();
  if (!g.matrices_only_ && k > 1) {
    g.check_squares(*squares);
    if (k >= 3) g.check_hexagons();
  }
  return g;
}

void KGraph::index_edges() {
  into_.assign(vertices_.size() * static_cast<std::size_t>(k_), {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    into_[static_cast<std::size_t>(edges_[e].range) * k_ + edges_[e].color].push_back(e);
}

void KGraph::check_commutation() const {
  for (int i = 0; i < k_; ++i) {
    for (int j = i + 1; j < k_; ++j) {
      const IntMatrix ab = matrices_[i] * matrices_[j];
      const IntMatrix ba = matrices_[j] * matrices_[i];
      for (Eigen::Index v = 0; v < ab.rows(); ++v) {
        for (Eigen::Index w = 0; w < ab.cols(); ++w) {
          if (ab(v, w) != ba(v, w)) {
            std::ostringstream msg;
            msg << "A_" << i + 1 << " A_" << j + 1 << " != A_" << j + 1 << " A_" << i + 1
                << " at (" << vertices_[v] << ", " << vertices_[w] << "): " << ab(v, w)
                << " vs " << ba(v, w);
            throw CommutationError(msg.str());
          }
        }
      }
    }
  }
}

void KGraph::check_squares(const std::vector<SquareSpec>& squares) {
  auto lookup = [&](const std::string& id) {
    auto e = find_edge(id);
    if (!e) throw SchemaError("square refers to unknown edge '" + id + "'");
    return *e;
  };
  for (const SquareSpec& sq : squares) {
    const int e = lookup(sq.e), f = lookup(sq.f), f2 = lookup(sq.f2), e2 = lookup(sq.e2);
    const Edge &E = edges_[e], &F = edges_[f], &F2 = edges_[f2], &E2 = edges_[e2];
    const std::string label = "square ((" + sq.e + "," + sq.f + "),(" + sq.f2 + "," + sq.e2 + "))";
    if (E.color != E2.color || F.color != F2.color || E.color == F.color)
      throw SquareBijectionError(label + " has inconsistent colours");
    if (E.source != F.range || F2.source != E2.range || E.range != F2.range ||
        F.source != E2.source)
      throw SquareBijectionError(label + " has inconsistent endpoints");
    if (!swap_.emplace(word_key(e, f), std::pair{f2, e2}).second)
      throw SquareBijectionError("word (" + sq.e + "," + sq.f + ") appears in two squares");
    if (!swap_.emplace(word_key(f2, e2), std::pair{e, f}).second)
      throw SquareBijectionError("word (" + sq.f2 + "," + sq.e2 + ") appears in two squares");
  }
  for (int a = 0; a < static_cast<int>(edges_.size()); ++a) {
    for (int c = 0; c < k_; ++c) {
      if (c == edges_[a].color) continue;
      for (int b : edges_into(edges_[a].source, c)) {
        if (!swap_.contains(word_key(a, b)))
          throw SquareBijectionError("no square covers the word (" + edges_[a].id + "," +
                                     edges_[b].id + ")");
      }
    }
  }
}

void KGraph::check_hexagons() const {
  for (int a = 0; a < static_cast<int>(edges_.size()); ++a) {
    const int ca = edges_[a].color;
    for (int cb = 0; cb < k_; ++cb) {
      if (cb == ca) continue;
      for (int b : edges_into(edges_[a].source, cb)) {
        for (int cc = 0; cc < k_; ++cc) {
          if (cc == ca || cc == cb) continue;
          for (int c : edges_into(edges_[b].source, cc)) {
            // Two routes that reverse the colour order of a b c.
            auto [b1, a1] = swap(a, b);
            auto [c1, a2] = swap(a1, c);
            auto [c2, b2] = swap(b1, c1);
            auto [c3, b3] = swap(b, c);
            auto [c4, a3] = swap(a, c3);
            auto [b4, a4] = swap(a3, b3);
            if (c2 != c4 || b2 != b4 || a2 != a4)
              throw HexagonError("factorisations of (" + edges_[a].id + "," + edges_[b].id +
                                 "," + edges_[c].id + ") disagree: (" + edges_[c2].id + "," +
                                 edges_[b2].id + "," + edges_[a2].id + ") vs (" +
                                 edges_[c4].id + "," + edges_[b4].id + "," + edges_[a4].id +
                                 ")");
          }
        }
      }
    }
  }
}

int KGraph::vertex_index(std::string_view id) const {
  auto v = find_vertex(id);
  if (!v) throw RangeError("unknown vertex '" + std::string(id) + "'");
  return *v;
}

std::optional<int> KGraph::find_vertex(std::string_view id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - vertices_.begin());
}

std::optional<int> KGraph::find_edge(std::string_view id) const {
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    if (edges_[e].id == id) return e;
  return std::nullopt;
}

std::pair<int, int> KGraph::swap(int a, int b) const {
  if (matrices_only_) throw MatricesOnlyError("factorisation squares are not available");
  auto it = swap_.find(word_key(a, b));
  if (it == swap_.end())
    throw ComposabilityError("no square for (" + edges_[a].id + "," + edges_[b].id + ")");
  return it->second;
}

std::vector<int> KGraph::normalize(std::vector<int> word) const {
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (edges_[word[i]].source != edges_[word[i + 1]].range)
      throw ComposabilityError("edges " + edges_[word[i]].id + " and " +
                               edges_[word[i + 1]].id + " do not compose");
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (edges_[word[i]].color > edges_[word[i + 1]].color) {
        std::tie(word[i], word[i + 1]) = swap(word[i], word[i + 1]);
        changed = true;
      }
    }
  }
  return word;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <class T>
T require(const nlohmann::json& doc, const char* key, const char* what) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("field '") + key + "' must be " + what);
  }
}

}  // namespace

KGraph parse_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("graph document must be a JSON object");
  const int k = require<int>(doc, "k", "an integer");
  auto vertices = require<std::vector<std::string>>(doc, "vertices", "a list of strings");
  const bool has_matrices = doc.contains("matrices");
  const bool has_edges = doc.contains("edges");
  if (has_matrices == has_edges)
    throw SchemaError("exactly one of 'edges' and 'matrices' must be present");

  if (has_matrices) {
    if (doc.contains("squares")) throw SchemaError("'squares' requires 'edges'");
    auto raw = require<std::vector<std::vector<std::vector<std::int64_t>>>>(
        doc, "matrices", "a list of integer matrices");
    std::vector<IntMatrix> mats;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      const auto n = static_cast<Eigen::Index>(vertices.size());
      if (static_cast<Eigen::Index>(raw[c].size()) != n)
        throw SchemaError("matrix " + std::to_string(c + 1) + " has the wrong number of rows");
      IntMatrix m(n, n);
      for (Eigen::Index a = 0; a < n; ++a) {
        if (static_cast<Eigen::Index>(raw[c][a].size()) != n)
          throw SchemaError("matrix " + std::to_string(c + 1) + " row " +
                            std::to_string(a + 1) + " has the wrong length");
        for (Eigen::Index b = 0; b < n; ++b) m(a, b) = raw[c][a][b];
      }
      mats.push_back(std::move(m));
    }
    return KGraph::from_matrices(k, std::move(vertices), mats);
  }

  if (!doc["edges"].is_array()) throw SchemaError("field 'edges' must be a list");
  std::vector<EdgeSpec> edges;
  for (const auto& item : doc["edges"]) {
    if (!item.is_object()) throw SchemaError("each edge must be an object");
    edges.push_back(EdgeSpec{require<std::string>(item, "id", "a string"),
                             require<int>(item, "color", "an integer"),
                             require<std::string>(item, "range", "a string"),
                             require<std::string>(item, "source", "a string")});
  }
  std::optional<std::vector<SquareSpec>> squares;
  if (doc.contains("squares")) {
    using Raw = std::vector<std::vector<std::vector<std::string>>>;
    Raw raw = require<Raw>(doc, "squares", "a list of [[e,f],[f2,e2]] entries");
    squares.emplace();
    for (const auto& sq : raw) {
      if (sq.size() != 2 || sq[0].size() != 2 || sq[1].size() != 2)
        throw SchemaError("each square must have the shape [[e,f],[f2,e2]]");
      squares->push_back(SquareSpec{sq[0][0], sq[0][1], sq[1][0], sq[1][1]});
    }
  }
  return KGraph::from_edges(k, std::move(vertices), edges, std::move(squares));
}

KGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read graph file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

IntMatrix vertex_matrix(const KGraph& g, const Degree& n) {
  const auto size = static_cast<Eigen::Index>(g.vertex_count());
  IntMatrix out = IntMatrix::Identity(size, size);
  for (int c = 0; c < g.rank(); ++c)
    for (int t = 0; t < n[c]; ++t) out = out * g.matrix(c);
  return out;
}

// ---------------------------------------------------------------------------
// Reachability

std::optional<int> ComponentPartition::find_class(const VertexSet& set) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == set) return static_cast<int>(i);
  return std::nullopt;
}

ComponentPartition components(const KGraph& g, ColorSet colors) {
  const int n = g.vertex_count();
  ComponentPartition out;
  out.colors = colors;
  out.reach.assign(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v) {
    out.reach[v][v] = 1;
    for (int c : colors.colors())
      for (int w = 0; w < n; ++w)
        if (g.matrix(c)(v, w) > 0) out.reach[v][w] = 1;
  }
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v)
      if (out.reach[v][m])
        for (int w = 0; w < n; ++w)
          if (out.reach[m][w]) out.reach[v][w] = 1;
  out.class_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (out.class_of[v] >= 0) continue;
    const int id = static_cast<int>(out.classes.size());
    out.classes.emplace_back();
    for (int w = v; w < n; ++w) {
      if (out.reach[v][w] && out.reach[w][v]) {
        out.class_of[w] = id;
        out.classes.back().push_back(w);
      }
    }
  }
  return out;
}

VertexSet closure(const ComponentPartition& partition, const VertexSet& set, bool hereditary) {
  const int n = static_cast<int>(partition.reach.size());
  VertexSet out;
  for (int w = 0; w < n; ++w) {
    for (int v : set) {
      if (hereditary ? partition.leq(v, w) : partition.leq(w, v)) {
        out.push_back(w);
        break;
      }
    }
  }
  return out;
}

VertexSet closure(const KGraph& g, const VertexSet& set, ColorSet colors, bool hereditary) {
  return closure(components(g, colors), set, hereditary);
}

VertexSet nonsource_vertices(const KGraph& g, ColorSet colors) {
  if (colors.empty()) throw EmptyColorSetError("nonsource_vertices needs a nonempty colour set");
  const int n = g.vertex_count();
  std::vector<char> in(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!in[v]) continue;
      for (int c : colors.colors()) {
        bool receives = false;
        for (int w = 0; w < n && !receives; ++w) receives = in[w] && g.matrix(c)(v, w) > 0;
        if (!receives) {
          in[v] = 0;
          changed = true;
          break;
        }
      }
    }
  }
  VertexSet out;
  for (int v = 0; v < n; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

std::vector<std::string> vertex_ids(const KGraph& g, const VertexSet& set) {
  std::vector<std::string> out;
  for (int v : set) out.push_back(g.vertex_id(v));
  return out;
}

VertexSet vertex_set(const KGraph& g, std::span<const std::string> ids) {
  VertexSet out;
  for (const auto& id : ids) out.push_back(g.vertex_index(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kgraph
