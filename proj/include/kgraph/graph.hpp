#ifndef KGRAPH_GRAPH_HPP
#define KGRAPH_GRAPH_HPP

// Finite k-graphs: vertex matrices, paths in factorisation normal form,
// reachability relations and closures.
//
// Conventions used throughout the library:
//   * Colours are 0-based internally (0..k-1) and 1-based in every external
//     format (graph JSON, CLI flags, rendered output).
//   * Vertices are indexed by their position in the lexicographically sorted
//     list of vertex ids. Every vector and matrix uses that order.
//   * A_c(v, w) counts colour-c edges with range v and source w.
//   * In a composed path "e f" the edge f is traversed first:
//     r(e f) = r(e), s(e f) = s(f), and s(e) = r(f).
//   * The normal form of a path lists its edges range-first with all colour-0
//     edges before all colour-1 edges, and so on.

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgraph {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<int>;

/// An element of N^k.
class Degree {
 public:
  Degree() = default;
  explicit Degree(std::size_t k) : n_(k, 0) {}
  Degree(std::initializer_list<int> values) : n_(values) {}
  explicit Degree(std::vector<int> values) : n_(std::move(values)) {}

  /// The generator e_color of N^k.
  static Degree unit(std::size_t k, int color) {
    Degree d(k);
    d.n_[color] = 1;
    return d;
  }

  std::size_t rank() const { return n_.size(); }
  int operator[](std::size_t i) const { return n_[i]; }
  int& operator[](std::size_t i) { return n_[i]; }
  const std::vector<int>& values() const { return n_; }

  int total() const {
    int s = 0;
    for (int x : n_) s += x;
    return s;
  }
  bool is_zero() const { return total() == 0; }

  /// Componentwise m <= n.
  bool leq(const Degree& other) const {
    for (std::size_t i = 0; i < n_.size(); ++i)
      if (n_[i] > other.n_[i]) return false;
    return true;
  }

  friend Degree operator+(const Degree& a, const Degree& b) {
    Degree out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) out.n_[i] = a.n_[i] + b.n_[i];
    return out;
  }
  /// Requires b <= a componentwise.
  friend Degree operator-(const Degree& a, const Degree& b) {
    Degree out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) out.n_[i] = a.n_[i] - b.n_[i];
    return out;
  }
  /// Pointwise maximum.
  friend Degree join(const Degree& a, const Degree& b) {
    Degree out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) out.n_[i] = std::max(a.n_[i], b.n_[i]);
    return out;
  }

  friend bool operator==(const Degree&, const Degree&) = default;
  friend auto operator<=>(const Degree&, const Degree&) = default;

 private:
  std::vector<int> n_;
};

/// A subset I of the colours {0, .., k-1}, stored as a bit mask.
class ColorSet {
 public:
  ColorSet() = default;
  static ColorSet from_mask(std::uint32_t mask) { return ColorSet(mask); }
  static ColorSet all(int k) { return ColorSet(k >= 32 ? ~0u : ((1u << k) - 1u)); }
  static ColorSet of(std::initializer_list<int> colors) {
    std::uint32_t m = 0;
    for (int c : colors) m |= 1u << c;
    return ColorSet(m);
  }

  bool contains(int color) const { return (mask_ >> color) & 1u; }
  bool empty() const { return mask_ == 0; }
  int size() const { return __builtin_popcount(mask_); }
  std::uint32_t mask() const { return mask_; }
  ColorSet complement(int k) const { return ColorSet(all(k).mask_ & ~mask_); }
  ColorSet with(int color) const { return ColorSet(mask_ | (1u << color)); }
  bool subset_of(ColorSet other) const { return (mask_ & ~other.mask_) == 0; }

  /// Colours in ascending order (0-based).
  std::vector<int> colors() const {
    std::vector<int> out;
    for (int c = 0; c < 32; ++c)
      if (contains(c)) out.push_back(c);
    return out;
  }

  friend bool operator==(ColorSet, ColorSet) = default;

 private:
  explicit ColorSet(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

/// Canonical ordering of colour sets: by size, then lexicographically by the
/// ascending colour list.
bool color_set_less(ColorSet a, ColorSet b);

struct Edge {
  std::string id;
  int color = 0;  // 0-based
  int range = 0;
  int source = 0;
};

/// A path in normal form. Two paths are the same morphism iff they compare
/// equal.
struct Path {
  int range = -1;
  int source = -1;
  Degree degree;
  std::vector<int> word;  // edge indices, range end first, colour-ascending

  bool is_vertex() const { return word.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Input description of one edge, in external (1-based colour) form.
struct EdgeSpec {
  std::string id;
  int color = 1;
  std::string range;
  std::string source;
};

/// The square e f = f2 e2, with f and e2 traversed first.
struct SquareSpec {
  std::string e, f, f2, e2;
};

/// An immutable, validated finite k-graph.
class KGraph {
 public:
  /// `matrices[c]` is row-major with rows/columns in the order of `vertices`
  /// as given (they are re-sorted internally).
  static KGraph from_matrices(int k, std::vector<std::string> vertices,
                              const std::vector<IntMatrix>& matrices);

  /// Pass `squares == std::nullopt` to build a graph whose factorisation
  /// rules are unknown; it then behaves like a matrices-only graph.
  static KGraph from_edges(int k, std::vector<std::string> vertices,
                           const std::vector<EdgeSpec>& edges,
                           std::optional<std::vector<SquareSpec>> squares);

  int rank() const { return k_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& vertex_id(int v) const { return vertices_[v]; }
  /// Throws RangeError for unknown ids.
  int vertex_index(std::string_view id) const;
  std::optional<int> find_vertex(std::string_view id) const;

  /// True when path identities are unavailable (no edges or no squares).
  bool matrices_only() const { return matrices_only_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  std::optional<int> find_edge(std::string_view id) const;

  /// Edges of the given colour whose range is v.
  const std::vector<int>& edges_into(int v, int color) const {
    return into_[static_cast<std::size_t>(v) * k_ + color];
  }

  /// A_color with rows = range, columns = source.
  const IntMatrix& matrix(int color) const { return matrices_[color]; }
  const std::vector<IntMatrix>& matrices() const { return matrices_; }

  /// The square partner of the two-edge word (a, b) with distinct colours
  /// and s(a) = r(b).
  std::pair<int, int> swap(int a, int b) const;

  /// Rewrites a composable edge word into normal form.
  std::vector<int> normalize(std::vector<int> word) const;

 private:
  KGraph() = default;
  void index_edges();
  void check_commutation() const;
  void check_squares(const std::vector<SquareSpec>& squares);
  void check_hexagons() const;

  int k_ = 0;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<IntMatrix> matrices_;
  std::vector<std::vector<int>> into_;
  std::unordered_map<std::uint64_t, std::pair<int, int>> swap_;
  bool matrices_only_ = true;
};

/// Parses the graph JSON document. Throws SchemaError, CommutationError,
/// SquareBijectionError or HexagonError.
KGraph parse_graph(std::string_view document);

/// Reads and parses a graph file.
KGraph load_graph(const std::string& path);

/// A^n = prod_i A_i^{n_i}; A^0 is the identity.
IntMatrix vertex_matrix(const KGraph& g, const Degree& n);

Path vertex_path(const KGraph& g, int v);
Path edge_path(const KGraph& g, int e);

/// Builds the path e_1 e_2 ... e_m from edge ids listed range-first.
/// An empty list is not allowed here; use vertex_path.
Path make_path(const KGraph& g, std::span<const std::string> edge_ids);

/// Normal form of p q. Requires s(p) = r(q).
Path compose(const KGraph& g, const Path& p, const Path& q);

/// The segment p(m, n): the middle factor of p = a b c with d(a) = m and
/// d(b) = n - m. Requires 0 <= m <= n <= d(p).
Path segment(const KGraph& g, const Path& p, const Degree& m, const Degree& n);

/// Visits every normal-form path with range v and degree n. When `allowed`
/// is given, every vertex on the path must be allowed. The visitor returns
/// false to stop early; the function then returns false.
bool for_each_path(const KGraph& g, int v, const Degree& n,
                   const std::function<bool(const Path&)>& visit,
                   const std::vector<bool>* allowed = nullptr);

std::vector<Path> enumerate_paths(const KGraph& g, int v, const Degree& n);

/// |v Lambda^n| = sum_w A^n(v, w). Available in matrices-only mode.
std::int64_t count_paths(const KGraph& g, int v, const Degree& n);

/// Lambda^min(p, q): pairs (kappa, eta) with p kappa = q eta and
/// d(p kappa) = d(p) v d(q).
std::vector<std::pair<Path, Path>> lambda_min(const KGraph& g, const Path& p,
                                              const Path& q);

/// Edge ids of the path, range-first; a vertex path renders as its vertex id.
std::string describe(const KGraph& g, const Path& p);

/// Equivalence classes of ~_I together with the preorder <=_I.
struct ComponentPartition {
  ColorSet colors;
  std::vector<VertexSet> classes;  // ordered by smallest member
  std::vector<int> class_of;       // vertex -> class index
  std::vector<std::vector<char>> reach;  // reach[v][w] iff v <=_I w

  bool leq(int v, int w) const { return reach[v][w] != 0; }
  /// Index of the class equal to `set`, if any.
  std::optional<int> find_class(const VertexSet& set) const;
};

ComponentPartition components(const KGraph& g, ColorSet colors);

/// closure: {w : w <=_I v for some v in V}; hereditary: {w : v <=_I w}.
VertexSet closure(const ComponentPartition& partition, const VertexSet& set,
                  bool hereditary = false);
VertexSet closure(const KGraph& g, const VertexSet& set, ColorSet colors,
                  bool hereditary = false);

/// Vertices that are not sources in Lambda_I. Throws EmptyColorSetError.
VertexSet nonsource_vertices(const KGraph& g, ColorSet colors);

/// Vertex ids of a set, in vertex order.
std::vector<std::string> vertex_ids(const KGraph& g, const VertexSet& set);

/// Parses a list of vertex ids into a sorted VertexSet.
VertexSet vertex_set(const KGraph& g, std::span<const std::string> ids);

}  // namespace kgraph

#endif  // KGRAPH_GRAPH_HPP
