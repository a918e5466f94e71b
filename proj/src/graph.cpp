#include "pnormcut/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace pnormcut {

std::string_view to_string(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::kMalformed: return "malformed";
    case GraphErrorKind::kVertexOutOfRange: return "vertex-out-of-range";
    case GraphErrorKind::kDuplicateEdge: return "duplicate-edge";
    case GraphErrorKind::kSelfLoop: return "self-loop";
    case GraphErrorKind::kDisconnected: return "disconnected";
    case GraphErrorKind::kNoEdges: return "no-edges";
    case GraphErrorKind::kEdgeCountMismatch: return "edge-count-mismatch";
  }
  return "unknown";
}

GraphError::GraphError(GraphErrorKind kind, int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), kind_(kind), line_(line) {}

namespace {

// Validation shared by the constructor and the parser; `lines[k]` is the
// source line of edge k (0 when unknown).
void validate(int n, std::vector<Edge>& edges, const std::vector<int>& lines, int header_line) {
  auto line_of = [&](std::size_t k) { return k < lines.size() ? lines[k] : 0; };
  if (n < 1) throw GraphError(GraphErrorKind::kMalformed, header_line, "vertex count must be positive");
  if (edges.empty()) throw GraphError(GraphErrorKind::kNoEdges, header_line, "graph has no edges");
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    Edge& e = edges[k];
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw GraphError(GraphErrorKind::kVertexOutOfRange, line_of(k),
                       "vertex index out of range 1.." + std::to_string(n));
    }
    if (e.u == e.v) throw GraphError(GraphErrorKind::kSelfLoop, line_of(k), "self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) {
      throw GraphError(GraphErrorKind::kDuplicateEdge, line_of(k),
                       "duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
  }
  // Union-find connectivity.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  int components = n;
  for (const Edge& e : edges) {
    const int a = find(e.u - 1);
    const int b = find(e.v - 1);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  if (components != 1) {
    throw GraphError(GraphErrorKind::kDisconnected, header_line,
                     "graph is disconnected (" + std::to_string(components) + " components)");
  }
}

bool parse_int(std::string_view tok, int& out) {
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  validate(n_, edges_, {}, 0);
  adjacency_.assign(n_, {});
  for (const Edge& e : edges_) {
    adjacency_[e.u - 1].push_back(e.v - 1);
    adjacency_[e.v - 1].push_back(e.u - 1);
  }
}

Graph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  int header_line = 0;
  int n = 0;
  int m = 0;
  std::vector<Edge> edges;
  std::vector<int> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    int a = 0;
    int b = 0;
    if (tokens.size() != 2 || !parse_int(tokens[0], a) || !parse_int(tokens[1], b)) {
      throw GraphError(GraphErrorKind::kMalformed, line_no, "expected two integers, got '" + line + "'");
    }
    if (header_line == 0) {
      if (a < 1 || b < 0) throw GraphError(GraphErrorKind::kMalformed, line_no, "header must be 'n m' with n >= 1");
      header_line = line_no;
      n = a;
      m = b;
      continue;
    }
    if (static_cast<int>(edges.size()) == m) {
      throw GraphError(GraphErrorKind::kEdgeCountMismatch, line_no,
                       "more edge lines than the declared " + std::to_string(m));
    }
    edges.push_back({a, b});
    edge_lines.push_back(line_no);
  }
  if (header_line == 0) throw GraphError(GraphErrorKind::kMalformed, line_no, "missing 'n m' header");
  if (static_cast<int>(edges.size()) != m) {
    throw GraphError(GraphErrorKind::kEdgeCountMismatch, line_no,
                     "declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  }
  validate(n, edges, edge_lines, header_line);
  return Graph(n, std::move(edges));
}

Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

std::string format_graph(const Graph& g) {
  std::ostringstream os;
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int s : entries_) {
    if (s != 1 && s != -1) throw std::invalid_argument("sign vector entries must be +1 or -1");
  }
}

SignVector SignVector::ones(std::size_t n) { return SignVector(std::vector<int>(n, 1)); }

std::vector<double> SignVector::to_doubles() const { return {entries_.begin(), entries_.end()}; }

SignVector SignVector::negated() const {
  std::vector<int> out(entries_);
  for (int& s : out) s = -s;
  return SignVector(std::move(out));
}

ExactMatrix incidence_matrix(const Graph& g) {
  ExactMatrix m(g.edge_count(), static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edges()[k];
    m(k, e.u - 1) = 1;
    m(k, e.v - 1) = -1;
  }
  return m;
}

long cut_value(const Graph& g, const SignVector& x) {
  if (x.size() != static_cast<std::size_t>(g.vertex_count())) {
    throw std::invalid_argument("cut_value: sign vector length does not match the vertex count");
  }
  long cut = 0;
  for (const Edge& e : g.edges()) cut += x[e.u - 1] != x[e.v - 1];
  return cut;
}

CutResult maxcut_bruteforce(const Graph& g, int limit) {
  const int n = g.vertex_count();
  if (n > limit) {
    throw std::length_error("maxcut_bruteforce: " + std::to_string(n) + " vertices exceeds the enumeration limit " +
                            std::to_string(limit));
  }
  const auto& adj = g.adjacency();
  std::vector<int> x(n, 1);
  std::vector<int> best_x = x;
  long cut = 0;
  long best = 0;
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  for (std::uint64_t step = 1; step < patterns; ++step) {
    const int v = std::countr_zero(step) + 1;
    long delta = 0;
    for (int u : adj[v]) delta += x[u] == x[v] ? 1 : -1;
    x[v] = -x[v];
    cut += delta;
    if (cut > best || (cut == best && x < best_x)) {
      best = cut;
      best_x = x;
    }
  }
  return {best, SignVector(std::move(best_x))};
}

Graph random_connected_graph(int n, double extra_edge_probability, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("random_connected_graph: need at least 2 vertices");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<int, int>> present;
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (present.emplace(a, b).second) edges.push_back({a, b});
  };
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    add(order[k], order[pick(rng)]);
  }
  std::bernoulli_distribution coin(extra_edge_probability);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (!present.count({a, b}) && coin(rng)) add(a, b);
  return Graph(n, std::move(edges));
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) edges.push_back({a, b});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int a = 1; a < n; ++a) edges.push_back({a, a + 1});
  edges.push_back({1, n});
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int a = 1; a < n; ++a) edges.push_back({a, a + 1});
  return Graph(n, std::move(edges));
}

Graph star_graph(int leaves) {
  std::vector<Edge> edges;
  for (int a = 2; a <= leaves + 1; ++a) edges.push_back({1, a});
  return Graph(leaves + 1, std::move(edges));
}

}  // namespace pnormcut
