#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/graph.hpp"
#include "pcc/rng.hpp"

namespace pcc {

/// Dynamics constants for particle competition and cooperation.
struct PccConfig {
  double p_grd = 0.6;           // probability of the greedy movement rule
  double delta_v = 0.1;         // domination change rate, (0, 1]
  double dist_exponent = 2.0;   // greedy weight falls off as (1 + dist)^-exponent
  // Hard sweep cap; unset means ceil(500000 / particles), at least 10000.
  std::optional<std::size_t> max_sweeps;
  double conv_epsilon = 1e-3;
  std::size_t conv_check_interval = 1000;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on an out-of-range field.
  void validate() const;
  std::size_t sweep_cap(std::size_t particle_count) const;
};

struct Particle {
  NodeId home = 0;
  ClassId team = 0;
  NodeId position = 0;
  double strength = 1.0;
  // Running estimate of hop distance to home; 0 at home, n-1 elsewhere until relaxed.
  std::vector<std::uint32_t> dist;
};

/// Full simulation state. Copyable; two copies advanced with equally seeded
/// streams stay identical.
struct PccState {
  Graph graph;
  PccConfig config;
  std::size_t class_count = 0;
  Matrix domination;     // n x C, rows sum to 1
  LabelVector labeled;   // fixed class per pre-labeled node
  std::vector<Particle> particles;  // ascending home node
  std::size_t sweep_count = 0;
  std::vector<double> distance_weight;  // (1 + d)^-exponent for d in [0, n)

  std::size_t size() const { return graph.size(); }
};

struct Prediction {
  std::vector<ClassId> labels;
  Matrix domination;
  std::size_t sweeps = 0;
  bool converged = false;

  std::size_t size() const { return labels.size(); }
};

PccState pcc_init(const Graph& graph, const LabelVector& labels, std::size_t class_count,
                  const PccConfig& config);

// Picks the next node for a particle: greedy rule with probability p_grd,
// uniform over neighbors otherwise. Greedy falls back to uniform when every
// neighbor weight is zero.
NodeId choose_move(const PccState& state, const Particle& particle, Rng& rng);

// Applies the domination, strength, distance and expulsion updates for one
// attempted move of `state.particles[particle]` onto `target`.
void apply_visit(PccState& state, std::size_t particle, NodeId target);

// One move per particle, in stored order.
void pcc_sweep(PccState& state, Rng& rng);

double mean_max_domination(const Matrix& domination);

// Lowest class index wins ties.
std::vector<ClassId> argmax_labels(const Matrix& domination);

// Runs to convergence or the sweep cap. If `trace` is non-null, one JSON
// record per sweep is written to it.
Prediction pcc_run(const Graph& graph, const LabelVector& labels, std::size_t class_count,
                   const PccConfig& config, std::ostream* trace = nullptr);

}  // namespace pcc
