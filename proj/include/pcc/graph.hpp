#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pcc/dataset.hpp"

namespace pcc {

using NodeId = std::size_t;

/// Undirected, unweighted graph. Sorted adjacency lists packed into one array.
class Graph {
 public:
  Graph() = default;

  // Takes ownership of adjacency lists; checks symmetry, sortedness, no
  // self-loops or duplicates. Throws std::invalid_argument on violation.
  explicit Graph(std::vector<std::vector<NodeId>> adjacency);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  bool has_edge(NodeId a, NodeId b) const;

  std::vector<std::vector<NodeId>> adjacency() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

// Union-symmetrized k-nearest-neighbor graph under Euclidean distance.
// Ties in distance go to the lower node index. Requires n >= 2, 1 <= k <= n-1.
Graph build_knn_graph(const FeatureMatrix& points, std::size_t k, unsigned threads = 1);

struct GraphReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t min_degree = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  // Components are numbered in order of their lowest node id.
  std::vector<std::size_t> component_sizes;
  std::vector<std::size_t> component_of;

  std::size_t component_count() const { return component_sizes.size(); }
};

GraphReport graph_diagnostics(const Graph& g);

// Debug dump, one line per node: `id: n1 n2 ...`.
void write_adjacency(const Graph& g, std::ostream& out);

}  // namespace pcc
