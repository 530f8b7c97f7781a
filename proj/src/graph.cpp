#include "embq/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "embq/error.hpp"
#include "embq/random.hpp"

namespace embq {
namespace {

// Seed streams used by the sparsifiers.
constexpr std::uint64_t kNaiveStream = 1;
constexpr std::uint64_t kTreeStream = 2;
constexpr std::uint64_t kExtraStream = 3;

void require_connected(const Graph& g) {
  const Components c = connected_components(g);
  if (c.count() <= 1) return;
  std::size_t other = 0;
  while (c.component_of[other] == c.component_of[0]) ++other;
  throw DataError("graph is disconnected (" + std::to_string(c.count()) + " components): node 0 "
                  "(component of size " + std::to_string(c.sizes[c.component_of[0]]) +
                  ") cannot reach node " + std::to_string(other) + " (component of size " +
                  std::to_string(c.sizes[c.component_of[other]]) + ")");
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Edge> edges) : n_(node_count), edges_(std::move(edges)) {
  if (n_ > std::numeric_limits<std::uint32_t>::max()) throw DataError("graph has too many nodes");
  for (auto& e : edges_) {
    if (e.u == e.v) throw DataError("self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n_) {
      throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") has an endpoint outside [0, " + std::to_string(n_) + ")");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  const auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw DataError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
  }
}

double Graph::average_degree() const {
  return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --sets_;
  return true;
}

Components connected_components(const Graph& g) {
  UnionFind uf(g.node_count());
  for (const Edge& e : g.edges()) uf.unite(e.u, e.v);
  Components c;
  c.component_of.assign(g.node_count(), 0);
  std::vector<std::size_t> label_of_root(g.node_count(), SIZE_MAX);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const std::size_t root = uf.find(i);
    if (label_of_root[root] == SIZE_MAX) {
      label_of_root[root] = c.sizes.size();
      c.sizes.push_back(0);
    }
    c.component_of[i] = label_of_root[root];
    ++c.sizes[label_of_root[root]];
  }
  return c;
}

bool is_connected(const Graph& g) { return connected_components(g).count() <= 1; }

LabeledGraph sbm_generate(const SbmParams& p) {
  if (p.blocks.empty()) throw DataError("SBM needs at least one block");
  for (std::size_t b : p.blocks) {
    if (b == 0) throw DataError("SBM block sizes must be >= 1");
  }
  if (!(0.0 <= p.p_out && p.p_out <= p.p_in && p.p_in <= 1.0)) {
    throw DataError("SBM probabilities must satisfy 0 <= p_out <= p_in <= 1");
  }
  LabeledGraph out;
  out.classes = p.blocks.size();
  for (std::size_t b = 0; b < p.blocks.size(); ++b) out.labels.insert(out.labels.end(), p.blocks[b], b);
  const std::size_t n = out.labels.size();

  CounterRng rng(p.seed);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double prob = out.labels[u] == out.labels[v] ? p.p_in : p.p_out;
      if (rng.next_unit() < prob) {
        edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
      }
    }
  }
  out.graph = Graph(n, std::move(edges));
  return out;
}

std::size_t edge_budget(std::size_t node_count, double target_degree) {
  if (!(target_degree >= 0.0) || !std::isfinite(target_degree)) {
    throw DataError("target degree must be a finite non-negative number");
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(node_count) * target_degree / 2.0));
}

Graph sparsify_naive(const Graph& g, double target_degree, std::uint64_t seed) {
  const std::size_t budget = edge_budget(g.node_count(), target_degree);
  if (budget > g.edge_count()) {
    throw DataError("edge budget " + std::to_string(budget) + " for target degree " +
                    std::to_string(target_degree) + " exceeds the " +
                    std::to_string(g.edge_count()) + " available edges");
  }
  CounterRng rng(derive_seed(seed, kNaiveStream));
  std::vector<Edge> kept;
  kept.reserve(budget);
  for (std::size_t i : select_indices(g.edge_count(), budget, rng)) kept.push_back(g.edges()[i]);
  return Graph(g.node_count(), std::move(kept));
}

Graph random_spanning_tree(const Graph& g, std::uint64_t seed) {
  require_connected(g);
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  UnionFind uf(g.node_count());
  std::vector<Edge> tree;
  tree.reserve(g.node_count() > 0 ? g.node_count() - 1 : 0);
  for (std::size_t i : order) {
    const Edge& e = g.edges()[i];
    if (uf.unite(e.u, e.v)) {
      tree.push_back(e);
      if (uf.sets() == 1) break;
    }
  }
  return Graph(g.node_count(), std::move(tree));
}

Graph sparsify_connected(const Graph& g, double target_degree, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  const std::size_t budget = edge_budget(n, target_degree);
  const std::size_t tree_edges = n > 0 ? n - 1 : 0;
  if (budget < tree_edges) {
    throw DataError("edge budget " + std::to_string(budget) + " for target degree " +
                    std::to_string(target_degree) + " is below the " + std::to_string(tree_edges) +
                    " edges of a spanning tree");
  }
  if (budget > g.edge_count()) {
    throw DataError("edge budget " + std::to_string(budget) + " exceeds the " +
                    std::to_string(g.edge_count()) + " available edges");
  }
  const Graph tree = random_spanning_tree(g, derive_seed(seed, kTreeStream));

  // Edges of g not in the tree; both lists are sorted.
  std::vector<Edge> rest;
  rest.reserve(g.edge_count() - tree.edge_count());
  std::set_difference(g.edges().begin(), g.edges().end(), tree.edges().begin(), tree.edges().end(),
                      std::back_inserter(rest));

  CounterRng rng(derive_seed(seed, kExtraStream));
  std::vector<Edge> out(tree.edges().begin(), tree.edges().end());
  for (std::size_t i : select_indices(rest.size(), budget - tree_edges, rng)) out.push_back(rest[i]);
  return Graph(n, std::move(out));
}

}  // namespace embq
