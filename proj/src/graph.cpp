#include "pcc/graph.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "pcc/parallel.hpp"

namespace pcc {

Graph::Graph(std::vector<std::vector<NodeId>> adjacency) {
  const std::size_t n = adjacency.size();
  for (NodeId v = 0; v < n; ++v) {
    const auto& adj = adjacency[v];
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const NodeId u = adj[i];
      if (u >= n) throw std::invalid_argument("graph: neighbor " + std::to_string(u) + " out of range");
      if (u == v) throw std::invalid_argument("graph: self-loop at node " + std::to_string(v));
      if (i > 0 && adj[i - 1] >= u)
        throw std::invalid_argument("graph: adjacency of node " + std::to_string(v) +
                                    " not strictly ascending");
      if (!std::binary_search(adjacency[u].begin(), adjacency[u].end(), v))
        throw std::invalid_argument("graph: edge " + std::to_string(v) + "-" + std::to_string(u) +
                                    " is not symmetric");
    }
  }
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  for (const auto& adj : adjacency) {
    targets_.insert(targets_.end(), adj.begin(), adj.end());
    offsets_.push_back(targets_.size());
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= size()) return false;
  const auto adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<std::vector<NodeId>> Graph::adjacency() const {
  std::vector<std::vector<NodeId>> out(size());
  for (NodeId v = 0; v < size(); ++v) out[v].assign(neighbors(v).begin(), neighbors(v).end());
  return out;
}

Graph build_knn_graph(const FeatureMatrix& points, std::size_t k, unsigned threads) {
  const std::size_t n = points.rows();
  if (n < 2) throw std::invalid_argument("knn graph: need at least 2 points, got " + std::to_string(n));
  if (k < 1 || k >= n)
    throw std::invalid_argument("knn graph: k=" + std::to_string(k) + " must lie in [1, " +
                                std::to_string(n - 1) + "]");

  const Matrix& x = points.values;
  std::vector<std::vector<NodeId>> selected(n);

  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::pair<double, NodeId>> cand;
    cand.reserve(n - 1);
    const auto row = x.row(static_cast<Eigen::Index>(i));
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back((x.row(static_cast<Eigen::Index>(j)) - row).squaredNorm(), j);
    }
    // Lexicographic pair order gives the ascending-index tie-break.
    std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1), cand.end());
    auto& out = selected[i];
    out.reserve(k);
    for (std::size_t m = 0; m < k; ++m) out.push_back(cand[m].second);
  });

  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : selected[i]) {
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return Graph(std::move(adj));
}

GraphReport graph_diagnostics(const Graph& g) {
  GraphReport r;
  const std::size_t n = g.size();
  r.nodes = n;
  r.edges = g.edge_count();
  if (n == 0) return r;

  r.min_degree = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t d = g.degree(v);
    r.min_degree = std::min(r.min_degree, d);
    r.max_degree = std::max(r.max_degree, d);
    total += d;
  }
  r.mean_degree = static_cast<double>(total) / static_cast<double>(n);

  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  r.component_of.assign(n, unseen);
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < n; ++s) {
    if (r.component_of[s] != unseen) continue;
    const std::size_t id = r.component_sizes.size();
    std::size_t size = 0;
    r.component_of[s] = id;
    frontier.push(s);
    while (!frontier.empty()) {
      const NodeId v = frontier.front();
      frontier.pop();
      ++size;
      for (NodeId u : g.neighbors(v))
        if (r.component_of[u] == unseen) {
          r.component_of[u] = id;
          frontier.push(u);
        }
    }
    r.component_sizes.push_back(size);
  }
  return r;
}

void write_adjacency(const Graph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.size(); ++v) {
    out << v << ':';
    for (NodeId u : g.neighbors(v)) out << ' ' << u;
    out << '\n';
  }
}

}  // namespace pcc
