#include "fixtures.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <queue>
#include <set>

using namespace kgraph;
using fixtures::int_matrix;

namespace {

std::vector<std::string> ids(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

VertexSet vs(const KGraph& g, std::initializer_list<const char*> list) {
  const auto names = ids(list);
  return vertex_set(g, names);
}

Path path(const KGraph& g, std::initializer_list<const char*> list) {
  const auto names = ids(list);
  return make_path(g, names);
}

// Breadth-first reachability along colour-I arcs of the vertex matrices:
// the vertices w with a path of colours in I from w down to v.
std::set<int> reaching(const KGraph& g, int v, ColorSet I) {
  std::set<int> seen{v};
  std::queue<int> todo;
  todo.push(v);
  while (!todo.empty()) {
    const int x = todo.front();
    todo.pop();
    for (int c : I.colors())
      for (int w = 0; w < g.vertex_count(); ++w)
        if (g.matrix(c)(w, x) > 0 && seen.insert(w).second) todo.push(w);
  }
  return seen;
}

// Number of colour-ordered edge strings of degree n starting at v: a
// direct recount that does not touch the vertex matrices.
std::int64_t count_words(const KGraph& g, int v, std::vector<int> n) {
  for (int c = 0; c < g.rank(); ++c) {
    if (n[c] == 0) continue;
    std::int64_t total = 0;
    --n[c];
    for (const Edge& e : g.edges())
      if (e.color == c && e.range == v) total += count_words(g, e.source, n);
    return total;
  }
  return 1;
}

KGraph cube(bool twisted) {
  // One vertex, two loops per colour. The twisted variant makes the swap
  // of a2 past colour 2 and of b2 past colour 3 flip the other index.
  std::vector<EdgeSpec> edges;
  for (const char* id : {"a1", "a2"}) edges.push_back({id, 1, "x", "x"});
  for (const char* id : {"b1", "b2"}) edges.push_back({id, 2, "x", "x"});
  for (const char* id : {"c1", "c2"}) edges.push_back({id, 3, "x", "x"});
  auto other = [](const std::string& id) { return id.substr(0, 1) + (id[1] == '1' ? "2" : "1"); };
  std::vector<SquareSpec> squares;
  for (std::string a : {"a1", "a2"})
    for (std::string b : {"b1", "b2"})
      squares.push_back({a, b, twisted && a == "a2" ? other(b) : b, a});
  for (std::string a : {"a1", "a2"})
    for (std::string c : {"c1", "c2"}) squares.push_back({a, c, c, a});
  for (std::string b : {"b1", "b2"})
    for (std::string c : {"c1", "c2"})
      squares.push_back({b, c, twisted && b == "b2" ? other(c) : c, b});
  return KGraph::from_edges(3, {"x"}, edges, squares);
}

}  // namespace

TEST(Parse, MatricesDocument) {
  const KGraph g = parse_graph(fixtures::ex1_json());
  EXPECT_EQ(g.rank(), 2);
  EXPECT_TRUE(g.matrices_only());
  EXPECT_EQ(g.matrix(0), int_matrix({{2, 2, 3}, {0, 4, 0}, {0, 0, 5}}));
  EXPECT_EQ(g.matrix(1), int_matrix({{2, 1, 2}, {0, 3, 0}, {0, 0, 4}}));
}

TEST(Parse, VerticesAreSortedAndMatricesPermuted) {
  const KGraph g = parse_graph(R"({"k": 1, "vertices": ["b", "a"], "matrices": [[[1, 2], [0, 3]]]})");
  EXPECT_EQ(g.vertices(), ids({"a", "b"}));
  EXPECT_EQ(g.matrix(0), int_matrix({{3, 0}, {2, 1}}));
}

TEST(Parse, EdgeDocument) {
  const KGraph g = parse_graph(R"({"k": 2, "vertices": ["x"],
      "edges": [{"id": "e", "color": 1, "range": "x", "source": "x"},
                {"id": "f", "color": 2, "range": "x", "source": "x"}],
      "squares": [[["e", "f"], ["f", "e"]]]})");
  EXPECT_FALSE(g.matrices_only());
  EXPECT_EQ(g.edges().size(), 2u);
}

TEST(Parse, NonCommutingMatrices) {
  EXPECT_THROW(parse_graph(R"({"k": 2, "vertices": ["u", "v", "w"],
      "matrices": [[[2, 2, 3], [0, 4, 0], [0, 0, 5]], [[2, 1, 2], [0, 4, 0], [0, 0, 4]]]})"),
               CommutationError);
}

TEST(Parse, SchemaViolations) {
  EXPECT_THROW(parse_graph("not json"), SchemaError);
  EXPECT_THROW(parse_graph(R"({"vertices": ["x"], "matrices": [[[1]]]})"), SchemaError);
  EXPECT_THROW(parse_graph(R"({"k": 1, "vertices": ["x", "x"], "matrices": [[[1, 0], [0, 1]]]})"),
               SchemaError);
  EXPECT_THROW(parse_graph(R"({"k": 2, "vertices": ["x"], "matrices": [[[1]]]})"), SchemaError);
  EXPECT_THROW(parse_graph(R"({"k": 1, "vertices": ["x"], "matrices": [[[-1]]]})"), SchemaError);
  EXPECT_THROW(parse_graph(R"({"k": 1, "vertices": ["x"],
      "edges": [{"id": "e", "color": 2, "range": "x", "source": "x"}]})"),
               SchemaError);
  EXPECT_THROW(parse_graph(R"({"k": 1, "vertices": ["x"],
      "edges": [{"id": "e", "color": 1, "range": "y", "source": "x"}]})"),
               SchemaError);
}

TEST(Parse, MissingSquare) {
  EXPECT_THROW(parse_graph(R"({"k": 2, "vertices": ["x"],
      "edges": [{"id": "e", "color": 1, "range": "x", "source": "x"},
                {"id": "f", "color": 2, "range": "x", "source": "x"}],
      "squares": []})"),
               SquareBijectionError);
}

TEST(Parse, DuplicateSquare) {
  EXPECT_THROW(parse_graph(R"({"k": 2, "vertices": ["x"],
      "edges": [{"id": "e1", "color": 1, "range": "x", "source": "x"},
                {"id": "e2", "color": 1, "range": "x", "source": "x"},
                {"id": "f", "color": 2, "range": "x", "source": "x"}],
      "squares": [[["e1", "f"], ["f", "e1"]], [["e2", "f"], ["f", "e1"]]]})"),
               SquareBijectionError);
}

TEST(Parse, SquareWithWrongColours) {
  EXPECT_THROW(parse_graph(R"({"k": 2, "vertices": ["x"],
      "edges": [{"id": "e", "color": 1, "range": "x", "source": "x"},
                {"id": "f", "color": 2, "range": "x", "source": "x"}],
      "squares": [[["e", "f"], ["e", "f"]]]})"),
               SquareBijectionError);
}

TEST(Parse, Hexagon) {
  EXPECT_NO_THROW(cube(false));
  EXPECT_THROW(cube(true), HexagonError);
}

TEST(Parse, RankOneNeedsNoSquares) {
  const KGraph g = fixtures::triv2();
  EXPECT_FALSE(g.matrices_only());
  EXPECT_EQ(g.matrix(0), int_matrix({{2}}));
}

TEST(VertexMatrix, Examples) {
  EXPECT_EQ(vertex_matrix(fixtures::triv1(), {3, 2}), int_matrix({{1}}));
  EXPECT_EQ(vertex_matrix(fixtures::ex1(), {1, 0}), fixtures::ex1().matrix(0));
  EXPECT_EQ(vertex_matrix(fixtures::ex2(2, 1, 4), {0, 2}), int_matrix({{4, 0}, {0, 4}}));
  EXPECT_EQ(vertex_matrix(fixtures::ex1(), {0, 0}), IntMatrix::Identity(3, 3));
}

TEST(VertexMatrix, MatchesRepeatedProducts) {
  const KGraph g = fixtures::ex1();
  IntMatrix expect = g.matrix(0) * g.matrix(0) * g.matrix(1);
  EXPECT_EQ(vertex_matrix(g, {2, 1}), expect);
}

TEST(Paths, ComposeNormalises) {
  const KGraph g = fixtures::triv1();
  const Path ef = compose(g, path(g, {"e"}), path(g, {"f"}));
  const Path fe = compose(g, path(g, {"f"}), path(g, {"e"}));
  EXPECT_EQ(ef, fe);
  EXPECT_EQ(ef.degree, Degree({1, 1}));
  EXPECT_EQ(describe(g, ef), "e,f");
}

TEST(Paths, ComposeRejectsMismatch) {
  const KGraph g = fixtures::ex2(1, 1, 1);
  EXPECT_THROW(compose(g, path(g, {"a1"}), path(g, {"b1"})), ComposabilityError);
  EXPECT_THROW(path(g, {"a1", "b1"}), ComposabilityError);
}

TEST(Paths, MatricesOnlyHasNoIdentities) {
  const KGraph g = fixtures::ex1();
  EXPECT_THROW(enumerate_paths(g, 0, {1, 0}), MatricesOnlyError);
  EXPECT_EQ(count_paths(g, 0, {1, 0}), 7);
  EXPECT_EQ(count_paths(g, 1, {0, 1}), 3);
}

TEST(Paths, SegmentExamples) {
  const KGraph g = fixtures::triv1();
  const Path p = path(g, {"e", "f"});
  EXPECT_EQ(segment(g, p, {0, 0}, {1, 1}), p);
  EXPECT_EQ(segment(g, p, {0, 0}, {0, 1}), path(g, {"f"}));
  EXPECT_EQ(segment(g, p, {1, 0}, {1, 0}), vertex_path(g, 0));
  EXPECT_THROW(segment(g, p, {0, 0}, {2, 0}), RangeError);
}

TEST(Paths, SegmentFollowsSquares) {
  const KGraph g = fixtures::ex2(1, 1, 1);
  // a1 f1 = f1 b1, so the colour-2 prefix of a1 f1 is f1 and the rest b1.
  const Path p = path(g, {"a1", "f1"});
  EXPECT_EQ(segment(g, p, {0, 0}, {0, 1}), path(g, {"f1"}));
  EXPECT_EQ(segment(g, p, {0, 1}, {1, 1}), path(g, {"b1"}));
  EXPECT_EQ(p, path(g, {"f1", "b1"}));
}

TEST(Paths, LambdaMinExamples) {
  const KGraph g = fixtures::triv1();
  const Path e = path(g, {"e"}), f = path(g, {"f"});
  const auto same = lambda_min(g, e, e);
  ASSERT_EQ(same.size(), 1u);
  EXPECT_TRUE(same[0].first.is_vertex());
  const auto ef = lambda_min(g, e, f);
  ASSERT_EQ(ef.size(), 1u);
  EXPECT_EQ(ef[0].first, f);
  EXPECT_EQ(ef[0].second, e);

  const KGraph h = fixtures::triv2();
  EXPECT_TRUE(lambda_min(h, path(h, {"e1"}), path(h, {"e2"})).empty());
}

TEST(Paths, FactorisationAndCounting) {
  for (const KGraph& g : {fixtures::triv1(), fixtures::ex2(1, 2, 3), fixtures::ex2(2, 1, 1)}) {
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int n1 = 0; n1 <= 2; ++n1)
        for (int n2 = 0; n2 <= 2; ++n2) {
          const Degree n{n1, n2};
          const auto paths = enumerate_paths(g, v, n);
          EXPECT_EQ(static_cast<std::int64_t>(paths.size()), count_words(g, v, {n1, n2}));
          EXPECT_EQ(static_cast<std::int64_t>(paths.size()), vertex_matrix(g, n).row(v).sum());
          for (const Path& p : paths)
            for (int m1 = 0; m1 <= n1; ++m1)
              for (int m2 = 0; m2 <= n2; ++m2) {
                const Degree m{m1, m2};
                EXPECT_EQ(compose(g, segment(g, p, Degree(2), m), segment(g, p, m, n)), p);
              }
        }
  }
}

TEST(Paths, CountingOnCube) {
  const KGraph g = cube(false);
  for (int total = 0; total <= 4; ++total)
    for (int a = 0; a <= total; ++a)
      for (int b = 0; a + b <= total; ++b) {
        const int c = total - a - b;
        EXPECT_EQ(static_cast<std::int64_t>(enumerate_paths(g, 0, {a, b, c}).size()),
                  count_words(g, 0, {a, b, c}));
      }
}

TEST(Paths, LambdaMinIsSymmetric) {
  const KGraph g = fixtures::ex2(2, 1, 2);
  std::vector<Path> all;
  for (int v = 0; v < 2; ++v)
    for (const Degree& d : {Degree{1, 0}, Degree{0, 1}, Degree{1, 1}, Degree{0, 0}})
      for (Path& p : enumerate_paths(g, v, d)) all.push_back(p);
  for (const Path& p : all)
    for (const Path& q : all) {
      if (p.range != q.range) continue;
      auto pq = lambda_min(g, p, q);
      auto qp = lambda_min(g, q, p);
      ASSERT_EQ(pq.size(), qp.size());
      for (const auto& [kappa, eta] : pq) {
        EXPECT_EQ(compose(g, p, kappa), compose(g, q, eta));
        EXPECT_EQ(compose(g, p, kappa).degree, join(p.degree, q.degree));
        EXPECT_NE(std::find(qp.begin(), qp.end(), std::make_pair(eta, kappa)), qp.end());
      }
    }
}

TEST(Components, Examples) {
  const KGraph g = fixtures::ex1();
  for (ColorSet I : {ColorSet::all(2), ColorSet{}}) {
    const auto part = components(g, I);
    ASSERT_EQ(part.classes.size(), 3u);
    EXPECT_EQ(part.classes[0], vs(g, {"u"}));
  }
  const KGraph h = fixtures::ex2(1, 2, 3);
  const auto part = components(h, ColorSet::of({1}));
  ASSERT_EQ(part.classes.size(), 1u);
  EXPECT_EQ(part.classes[0], vs(h, {"v", "w"}));
}

TEST(Components, ReachabilityMatchesSearch) {
  for (const KGraph& g : {fixtures::ex1(), fixtures::ex2(1, 1, 2), fixtures::triv1()})
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
      const ColorSet I = ColorSet::from_mask(mask);
      const auto part = components(g, I);
      for (int v = 0; v < g.vertex_count(); ++v) {
        const auto up = reaching(g, v, I);
        for (int w = 0; w < g.vertex_count(); ++w) {
          EXPECT_EQ(part.leq(w, v), up.count(w) > 0);
          const bool same = part.class_of[v] == part.class_of[w];
          EXPECT_EQ(same, part.leq(v, w) && part.leq(w, v));
        }
      }
    }
}

TEST(Components, RefineAsColoursShrink) {
  const KGraph g = fixtures::ex2(2, 1, 1);
  const auto full = components(g, ColorSet::all(2));
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    const auto part = components(g, ColorSet::from_mask(mask));
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int w = 0; w < g.vertex_count(); ++w)
        if (part.class_of[v] == part.class_of[w]) EXPECT_EQ(full.class_of[v], full.class_of[w]);
  }
}

TEST(Closure, Examples) {
  const KGraph g = fixtures::ex1();
  const ColorSet all = ColorSet::all(2);
  EXPECT_EQ(closure(g, vs(g, {"v"}), all), vs(g, {"u", "v"}));
  EXPECT_EQ(closure(g, vs(g, {"u"}), all), vs(g, {"u"}));
  EXPECT_EQ(closure(g, vs(g, {"u"}), all, true), vs(g, {"u", "v", "w"}));
  EXPECT_EQ(closure(g, vs(g, {"w"}), ColorSet{}), vs(g, {"w"}));
}

TEST(Closure, MonotoneAndIdempotent) {
  const KGraph g = fixtures::ex1();
  for (std::uint32_t mask = 0; mask < 4; ++mask)
    for (std::uint32_t bits = 1; bits < 8; ++bits) {
      VertexSet V;
      for (int v = 0; v < 3; ++v)
        if (bits >> v & 1u) V.push_back(v);
      const ColorSet I = ColorSet::from_mask(mask);
      for (bool hereditary : {false, true}) {
        const VertexSet once = closure(g, V, I, hereditary);
        EXPECT_TRUE(std::includes(once.begin(), once.end(), V.begin(), V.end()));
        EXPECT_EQ(closure(g, once, I, hereditary), once);
      }
    }
}

TEST(Nonsource, Examples) {
  EXPECT_EQ(nonsource_vertices(fixtures::triv1(), ColorSet::of({0})), VertexSet{0});
  EXPECT_EQ(nonsource_vertices(fixtures::ex1(), ColorSet::all(2)), (VertexSet{0, 1, 2}));
  const KGraph bare = KGraph::from_matrices(1, {"x"}, {int_matrix({{0}})});
  EXPECT_TRUE(nonsource_vertices(bare, ColorSet::of({0})).empty());
  EXPECT_THROW(nonsource_vertices(bare, ColorSet{}), EmptyColorSetError);
}

TEST(Nonsource, ChainLosesItsSourceEnd) {
  // x <- y <- z under colour 1 with a loop at x only: y and z are sources
  // eventually, x is not.
  const KGraph g = KGraph::from_matrices(1, {"x", "y", "z"},
                                         {int_matrix({{1, 1, 0}, {0, 0, 1}, {0, 0, 0}})});
  EXPECT_EQ(nonsource_vertices(g, ColorSet::of({0})), VertexSet{0});
}
