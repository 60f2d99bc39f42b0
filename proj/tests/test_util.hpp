#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcc/dataset.hpp"
#include "pcc/graph.hpp"
#include "pcc/rng.hpp"

namespace pcc::test {

inline Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

inline oracle::Rows to_rows(const Matrix& m) {
  oracle::Rows out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline FeatureMatrix features(const Matrix& m) {
  std::vector<std::string> ids;
  for (Eigen::Index i = 0; i < m.rows(); ++i) ids.push_back("r" + std::to_string(i));
  return FeatureMatrix::make(std::move(ids), m);
}

inline Graph graph_from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return Graph(std::move(adj));
}

inline Graph clique_pair(std::size_t size) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t base : {std::size_t{0}, size})
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j) edges.emplace_back(base + i, base + j);
  return graph_from_edges(2 * size, edges);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pcc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pcc::test
