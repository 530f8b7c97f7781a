#pragma once

// Simple undirected graphs, stochastic block models and the two edge
// sparsifiers used for controlled-degradation experiments.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace embq {

struct Edge {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Node count plus a sorted set of distinct edges u < v.
class Graph {
 public:
  Graph() = default;
  /// Canonicalises (u, v) order and sorts; throws DataError on self-loops,
  /// duplicates or out-of-range endpoints.
  Graph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  /// 2 |E| / n
  double average_degree() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  /// False if already in the same set.
  bool unite(std::size_t a, std::size_t b);
  std::size_t sets() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

struct Components {
  std::vector<std::size_t> component_of;  // per node, labels 0..count-1 by first node
  std::vector<std::size_t> sizes;
  std::size_t count() const { return sizes.size(); }
};

Components connected_components(const Graph& g);
bool is_connected(const Graph& g);

struct SbmParams {
  std::vector<std::size_t> blocks;  // block sizes, each >= 1
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;
};

struct LabeledGraph {
  Graph graph;
  std::vector<std::size_t> labels;  // block id per node
  std::size_t classes = 0;
};

/// Each pair (u < v) is an edge with probability p_in inside a block and
/// p_out across blocks; pair k in lexicographic order consumes draw k of
/// CounterRng(seed). Nodes are numbered block by block.
LabeledGraph sbm_generate(const SbmParams& params);

/// T = round(n * target_degree / 2): the edge count whose average degree
/// is target_degree.
std::size_t edge_budget(std::size_t node_count, double target_degree);

/// T edges of g chosen uniformly without replacement. Throws DataError if
/// T exceeds |E|.
Graph sparsify_naive(const Graph& g, double target_degree, std::uint64_t seed);

/// Randomized Kruskal: shuffle the edge list, keep edges joining distinct
/// components. Not uniform over spanning trees. Throws DataError if g is
/// disconnected.
Graph random_spanning_tree(const Graph& g, std::uint64_t seed);

/// Random spanning tree plus T - (n - 1) further edges drawn uniformly from
/// the rest; connected with exactly T edges. Throws DataError if g is
/// disconnected or T < n - 1.
Graph sparsify_connected(const Graph& g, double target_degree, std::uint64_t seed);

}  // namespace embq
