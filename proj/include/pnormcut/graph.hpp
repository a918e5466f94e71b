#ifndef PNORMCUT_GRAPH_HPP
#define PNORMCUT_GRAPH_HPP

#include <cstdint>
#include <istream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pnormcut/matrix.hpp"

namespace pnormcut {

/// Largest vertex count accepted by the exhaustive sign-vector searches.
inline constexpr int kDefaultEnumerationLimit = 24;

/// Undirected edge with 1-based endpoints, u < v.
struct Edge {
  int u;
  int v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class GraphErrorKind {
  kMalformed,
  kVertexOutOfRange,
  kDuplicateEdge,
  kSelfLoop,
  kDisconnected,
  kNoEdges,
  kEdgeCountMismatch,
};

std::string_view to_string(GraphErrorKind kind);

class GraphError : public std::runtime_error {
 public:
  /// line is 1-based; 0 when the graph was not read from text.
  GraphError(GraphErrorKind kind, int line, const std::string& what);
  GraphErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  GraphErrorKind kind_;
  int line_;
};

/// Simple connected undirected graph on vertices 1..n with at least one edge.
/// Edge order is preserved; it fixes the row order of the incidence matrix.
class Graph {
 public:
  /// Normalizes each edge to u < v and validates. Throws GraphError.
  Graph(int n, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  /// 0-based adjacency lists.
  const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Reads the edge-list format: a header "n m", then m lines "u v" with
/// 1-based vertices. '#' starts a comment; blank lines are ignored.
Graph parse_graph(std::istream& in);
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

/// Entries are exactly -1 or +1.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> entries);
  /// All +1.
  static SignVector ones(std::size_t n);

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }
  std::vector<double> to_doubles() const;
  SignVector negated() const;

  friend bool operator==(const SignVector&, const SignVector&) = default;
  /// Lexicographic with -1 < +1.
  friend bool operator<(const SignVector& a, const SignVector& b) { return a.entries_ < b.entries_; }

 private:
  std::vector<int> entries_;
};

struct CutResult {
  long value = 0;
  SignVector witness;
};

/// |E| x n; row k has +1 at the smaller and -1 at the larger endpoint of
/// edge k.
ExactMatrix incidence_matrix(const Graph& g);

/// Number of edges whose endpoints carry different signs.
long cut_value(const Graph& g, const SignVector& x);

/// Exact maximum cut by Gray-code enumeration of the 2^{n-1} sign vectors
/// with x_1 = +1. Ties go to the lexicographically smallest witness.
CutResult maxcut_bruteforce(const Graph& g, int limit = kDefaultEnumerationLimit);

/// Random spanning tree plus each remaining pair independently with
/// probability extra_edge_probability.
Graph random_connected_graph(int n, double extra_edge_probability, std::mt19937_64& rng);

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph star_graph(int leaves);

}  // namespace pnormcut

#endif  // PNORMCUT_GRAPH_HPP
