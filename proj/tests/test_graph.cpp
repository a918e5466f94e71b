#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "pnormcut/graph.hpp"

using namespace pnormcut;

namespace {

// Plain enumeration over all 2^n subsets, no symmetry or Gray code.
long naive_maxcut(const Graph& g) {
  const int n = g.vertex_count();
  long best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    long cut = 0;
    for (const Edge& e : g.edges()) cut += ((mask >> (e.u - 1)) & 1u) != ((mask >> (e.v - 1)) & 1u);
    best = std::max(best, cut);
  }
  return best;
}

GraphErrorKind error_kind(std::string_view text) {
  try {
    parse_graph(text);
  } catch (const GraphError& e) {
    return e.kind();
  }
  FAIL("expected a GraphError");
  return GraphErrorKind::kMalformed;
}

int error_line(std::string_view text) {
  try {
    parse_graph(text);
  } catch (const GraphError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parse_graph accepts the edge-list format") {
  const Graph k3 = parse_graph("3 3\n1 2\n2 3\n1 3");
  CHECK(k3.vertex_count() == 3);
  CHECK(k3.edge_count() == 3);
  const Graph edge = parse_graph("2 1\n1 2\n");
  CHECK(edge.edge_count() == 1);
  const Graph commented = parse_graph("# triangle\n3 3  # header\n\n2 1\n3 2\n1 3\n");
  CHECK(commented.edges()[0] == Edge{1, 2});
  CHECK(commented.edges()[1] == Edge{2, 3});
}

TEST_CASE("parse_graph reports each defect with its line") {
  CHECK(error_kind("4 2\n1 2\n3 4") == GraphErrorKind::kDisconnected);
  CHECK(error_line("4 2\n1 2\n3 4") == 1);
  CHECK(error_kind("3 2\n1 2\n2 7") == GraphErrorKind::kVertexOutOfRange);
  CHECK(error_line("3 2\n1 2\n2 7") == 3);
  CHECK(error_kind("3 3\n1 2\n2 3\n2 1") == GraphErrorKind::kDuplicateEdge);
  CHECK(error_line("3 3\n1 2\n2 3\n2 1") == 4);
  CHECK(error_kind("2 2\n1 2\n2 2") == GraphErrorKind::kSelfLoop);
  CHECK(error_kind("3 2\n1 2\nfoo bar") == GraphErrorKind::kMalformed);
  CHECK(error_line("3 2\n1 2\nfoo bar") == 3);
  CHECK(error_kind("3 2\n1 2 3\n2 3") == GraphErrorKind::kMalformed);
  CHECK(error_kind("3 3\n1 2\n2 3") == GraphErrorKind::kEdgeCountMismatch);
  CHECK(error_kind("3 1\n1 2\n2 3") == GraphErrorKind::kEdgeCountMismatch);
  CHECK(error_kind("1 0\n") == GraphErrorKind::kNoEdges);
  CHECK(error_kind("") == GraphErrorKind::kMalformed);
}

TEST_CASE("format_graph round-trips") {
  std::mt19937_64 rng(5);
  const Graph g = random_connected_graph(7, 0.4, rng);
  const Graph back = parse_graph(format_graph(g));
  CHECK(back.edges() == g.edges());
  CHECK(back.vertex_count() == g.vertex_count());
}

TEST_CASE("incidence matrix orientation and row order") {
  CHECK(incidence_matrix(parse_graph("2 1\n1 2")) == ExactMatrix{{1, -1}});
  CHECK(incidence_matrix(path_graph(3)) == ExactMatrix{{1, -1, 0}, {0, 1, -1}});
  const ExactMatrix k3 = incidence_matrix(complete_graph(3));
  CHECK(k3 == ExactMatrix{{1, -1, 0}, {1, 0, -1}, {0, 1, -1}});
  // Edges given larger-first are still oriented smaller -> larger.
  CHECK(incidence_matrix(parse_graph("2 1\n2 1")) == ExactMatrix{{1, -1}});
  Rational frob = 0;
  for (const auto& v : k3.data()) frob += v * v;
  CHECK(frob == 2 * 3);
}

TEST_CASE("cut_value") {
  const Graph k3 = complete_graph(3);
  CHECK(cut_value(k3, SignVector({1, 1, -1})) == 2);
  CHECK(cut_value(k3, SignVector::ones(3)) == 0);
  CHECK(cut_value(complete_graph(4), SignVector({1, 1, -1, -1})) == 4);
  CHECK_THROWS_AS(cut_value(k3, SignVector({1, -1})), std::invalid_argument);
  CHECK_THROWS_AS(SignVector({1, 0, -1}), std::invalid_argument);
}

TEST_CASE("maxcut_bruteforce on named graphs") {
  CHECK(maxcut_bruteforce(complete_graph(3)).value == 2);
  CHECK(maxcut_bruteforce(complete_graph(4)).value == 4);
  CHECK(maxcut_bruteforce(complete_graph(5)).value == 6);
  CHECK(maxcut_bruteforce(cycle_graph(5)).value == 4);
  CHECK(maxcut_bruteforce(cycle_graph(6)).value == 6);
  CHECK(maxcut_bruteforce(star_graph(3)).value == 3);
  CHECK(maxcut_bruteforce(path_graph(7)).value == 6);
  const CutResult k3 = maxcut_bruteforce(complete_graph(3));
  CHECK(k3.witness == SignVector({1, -1, -1}));  // lexicographically smallest with x_1 = +1
  CHECK_THROWS_AS(maxcut_bruteforce(complete_graph(6), 5), std::length_error);
}

TEST_CASE("maxcut_bruteforce agrees with naive enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 10;
    const Graph g = random_connected_graph(n, 0.35, rng);
    const CutResult r = maxcut_bruteforce(g);
    REQUIRE(r.value == naive_maxcut(g));
    CHECK(cut_value(g, r.witness) == r.value);
    CHECK(r.witness[0] == 1);
    CHECK(r.value <= static_cast<long>(g.edge_count()));
    CHECK(r.value < static_cast<long>(n) * n);
  }
}

TEST_CASE("witness is the lexicographic minimum among maximizers") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = random_connected_graph(6, 0.5, rng);
    const CutResult r = maxcut_bruteforce(g);
    for (unsigned mask = 0; mask < 32; ++mask) {
      std::vector<int> s{1};
      for (int j = 0; j < 5; ++j) s.push_back((mask >> (4 - j)) & 1u ? 1 : -1);
      const SignVector x(s);
      if (cut_value(g, x) == r.value) CHECK_FALSE(x < r.witness);
    }
  }
}

TEST_CASE("max-cut is invariant under flips and relabeling") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 8;
    const Graph g = random_connected_graph(n, 0.4, rng);
    const CutResult r = maxcut_bruteforce(g);
    CHECK(cut_value(g, r.witness.negated()) == r.value);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> relabeled;
    for (const Edge& e : g.edges()) relabeled.push_back({perm[e.u - 1], perm[e.v - 1]});
    CHECK(maxcut_bruteforce(Graph(n, relabeled)).value == r.value);
  }
}

TEST_CASE("bipartite graphs cut every edge") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    // Random tree: always bipartite.
    const int n = 2 + trial % 12;
    const Graph tree = random_connected_graph(n, 0.0, rng);
    CHECK(maxcut_bruteforce(tree).value == static_cast<long>(tree.edge_count()));
  }
  CHECK(maxcut_bruteforce(cycle_graph(8)).value == 8);
}

TEST_CASE("random_connected_graph produces valid graphs") {
  std::mt19937_64 rng(37);
  for (int n = 2; n <= 12; ++n) {
    const Graph g = random_connected_graph(n, 0.3, rng);
    CHECK(g.vertex_count() == n);
    CHECK(g.edge_count() >= static_cast<std::size_t>(n - 1));
  }
  CHECK_THROWS(random_connected_graph(1, 0.5, rng));
}
