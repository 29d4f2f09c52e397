#ifndef KGRAPH_TESTS_FIXTURES_HPP
#define KGRAPH_TESTS_FIXTURES_HPP

// Small k-graphs shared by the test binaries.

#include "kgraph/graph.hpp"
#include "kgraph/query.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fixtures {

using kgraph::EdgeSpec;
using kgraph::IntMatrix;
using kgraph::KGraph;
using kgraph::SquareSpec;

inline IntMatrix int_matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (std::int64_t x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Three vertices, each with loops of both colours; matrices only.
inline KGraph ex1() {
  return KGraph::from_matrices(2, {"u", "v", "w"},
                               {int_matrix({{2, 2, 3}, {0, 4, 0}, {0, 0, 5}}),
                                int_matrix({{2, 1, 2}, {0, 3, 0}, {0, 0, 4}})});
}

inline const char* ex1_json() {
  return R"({"k": 2, "vertices": ["u", "v", "w"],
             "matrices": [[[2, 2, 3], [0, 4, 0], [0, 0, 5]],
                          [[2, 1, 2], [0, 3, 0], [0, 0, 4]]]})";
}

// Two vertices v, w with l colour-1 loops each (a_s at v, b_s at w), p
// colour-2 edges f_i from w to v and q colour-2 edges g_j from v to w.
inline KGraph ex2(int l, int p, int q) {
  std::vector<EdgeSpec> edges;
  std::vector<SquareSpec> squares;
  for (int s = 1; s <= l; ++s) {
    edges.push_back({"a" + std::to_string(s), 1, "v", "v"});
    edges.push_back({"b" + std::to_string(s), 1, "w", "w"});
  }
  for (int i = 1; i <= p; ++i) edges.push_back({"f" + std::to_string(i), 2, "v", "w"});
  for (int j = 1; j <= q; ++j) edges.push_back({"g" + std::to_string(j), 2, "w", "v"});
  for (int s = 1; s <= l; ++s) {
    const std::string a = "a" + std::to_string(s), b = "b" + std::to_string(s);
    for (int i = 1; i <= p; ++i) {
      const std::string f = "f" + std::to_string(i);
      squares.push_back({a, f, f, b});
    }
    for (int j = 1; j <= q; ++j) {
      const std::string g = "g" + std::to_string(j);
      squares.push_back({b, g, g, a});
    }
  }
  return KGraph::from_edges(2, {"v", "w"}, edges, squares);
}

// One vertex, one loop of each colour.
inline KGraph triv1() {
  return KGraph::from_edges(2, {"x"}, {{"e", 1, "x", "x"}, {"f", 2, "x", "x"}},
                            std::vector<SquareSpec>{{"e", "f", "f", "e"}});
}

// One vertex, two loops, k = 1.
inline KGraph triv2() {
  return KGraph::from_edges(1, {"x"}, {{"e1", 1, "x", "x"}, {"e2", 1, "x", "x"}},
                            std::vector<SquareSpec>{});
}

inline kgraph::Query ex1_query(double beta) {
  return kgraph::Query::from_log_bases(beta, {{5, 1}, {4, 1}});
}

// beta = 1, r = (ln l, ln 2 sqrt(pq)).
inline kgraph::Query ex2_query(int l, int p, int q) {
  return kgraph::Query::from_r(1.0, {std::log(double(l)), std::log(2.0 * std::sqrt(double(p * q)))});
}

}  // namespace fixtures

#endif  // KGRAPH_TESTS_FIXTURES_HPP
