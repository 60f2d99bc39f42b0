#include "pcc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace pcc {

void PccConfig::validate() const {
  if (!(p_grd >= 0.0 && p_grd <= 1.0)) throw std::invalid_argument("pcc config: p_grd must lie in [0, 1]");
  if (!(delta_v > 0.0 && delta_v <= 1.0)) throw std::invalid_argument("pcc config: delta_v must lie in (0, 1]");
  if (!(dist_exponent >= 0.0) || !std::isfinite(dist_exponent))
    throw std::invalid_argument("pcc config: dist_exponent must be finite and >= 0");
  if (max_sweeps && *max_sweeps < 1) throw std::invalid_argument("pcc config: max_sweeps must be >= 1");
  if (!(conv_epsilon >= 0.0)) throw std::invalid_argument("pcc config: conv_epsilon must be >= 0");
  if (conv_check_interval < 1) throw std::invalid_argument("pcc config: conv_check_interval must be >= 1");
}

std::size_t PccConfig::sweep_cap(std::size_t particle_count) const {
  if (max_sweeps) return *max_sweeps;
  constexpr std::size_t budget = 500000;
  constexpr std::size_t floor = 10000;
  const std::size_t per = particle_count == 0 ? budget : (budget + particle_count - 1) / particle_count;
  return std::max(per, floor);
}

PccState pcc_init(const Graph& graph, const LabelVector& labels, std::size_t class_count,
                  const PccConfig& config) {
  config.validate();
  const std::size_t n = graph.size();
  if (labels.size() != n)
    throw std::invalid_argument("pcc init: " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(n) + " graph nodes");

  std::vector<bool> present(class_count, false);
  std::size_t labeled = 0;
  for (const auto& l : labels) {
    if (!l) continue;
    if (*l < 0 || static_cast<std::size_t>(*l) >= class_count)
      throw std::invalid_argument("pcc init: label " + std::to_string(*l) + " outside [0, " +
                                  std::to_string(class_count) + ")");
    present[static_cast<std::size_t>(*l)] = true;
    ++labeled;
  }
  if (labeled == 0) throw std::invalid_argument("pcc init: no labeled nodes");
  if (std::count(present.begin(), present.end(), true) < 2)
    throw std::invalid_argument("pcc init: labeled nodes must cover at least 2 classes");

  PccState s;
  s.graph = graph;
  s.config = config;
  s.class_count = class_count;
  s.labeled = labels;
  const auto c = static_cast<Eigen::Index>(class_count);
  s.domination = Matrix::Constant(static_cast<Eigen::Index>(n), c, 1.0 / static_cast<double>(class_count));

  const auto far = static_cast<std::uint32_t>(n - 1);
  s.particles.reserve(labeled);
  for (NodeId v = 0; v < n; ++v) {
    if (!labels[v]) continue;
    s.domination.row(static_cast<Eigen::Index>(v)).setZero();
    s.domination(static_cast<Eigen::Index>(v), *labels[v]) = 1.0;
    Particle p;
    p.home = v;
    p.team = *labels[v];
    p.position = v;
    p.strength = 1.0;
    p.dist.assign(n, far);
    p.dist[v] = 0;
    s.particles.push_back(std::move(p));
  }

  s.distance_weight.resize(n);
  for (std::size_t d = 0; d < n; ++d)
    s.distance_weight[d] = std::pow(1.0 + static_cast<double>(d), -config.dist_exponent);
  return s;
}

NodeId choose_move(const PccState& state, const Particle& particle, Rng& rng) {
  const auto nbrs = state.graph.neighbors(particle.position);
  const auto team = static_cast<Eigen::Index>(particle.team);

  if (rng.uniform() < state.config.p_grd) {
    auto weight = [&](NodeId j) {
      return state.domination(static_cast<Eigen::Index>(j), team) * state.distance_weight[particle.dist[j]];
    };
    double total = 0.0;
    for (NodeId j : nbrs) total += weight(j);
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      NodeId last = nbrs.front();
      for (NodeId j : nbrs) {
        const double w = weight(j);
        if (w <= 0.0) continue;
        acc += w;
        last = j;
        if (r < acc) return j;
      }
      return last;
    }
  }
  return nbrs[rng.below(nbrs.size())];
}

void apply_visit(PccState& state, std::size_t index, NodeId target) {
  Particle& particle = state.particles[index];
  const NodeId previous = particle.position;
  const auto team = static_cast<Eigen::Index>(particle.team);
  auto row = state.domination.row(static_cast<Eigen::Index>(target));
  const Eigen::Index classes = row.size();

  if (!state.labeled[target] && classes > 1) {
    const double step = state.config.delta_v * particle.strength / static_cast<double>(classes - 1);
    double gained = 0.0;
    bool rivals_left = false;
    for (Eigen::Index c = 0; c < classes; ++c) {
      if (c == team) continue;
      const double loss = std::min(step, row[c]);
      row[c] -= loss;
      gained += loss;
      rivals_left = rivals_left || row[c] > 0.0;
    }
    row[team] = rivals_left ? std::min(1.0, row[team] + gained) : 1.0;
  }

  particle.strength = std::clamp(row[team], 0.0, 1.0);

  auto& dist = particle.dist;
  dist[target] = std::min(dist[target], dist[previous] + 1);

  bool dominates = true;
  for (Eigen::Index c = 0; c < classes && dominates; ++c)
    if (c != team && row[c] >= row[team]) dominates = false;
  particle.position = dominates ? target : previous;
}

void pcc_sweep(PccState& state, Rng& rng) {
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    const NodeId target = choose_move(state, state.particles[i], rng);
    apply_visit(state, i, target);
  }
  ++state.sweep_count;
}

double mean_max_domination(const Matrix& domination) {
  if (domination.rows() == 0) return 0.0;
  return domination.rowwise().maxCoeff().mean();
}

std::vector<ClassId> argmax_labels(const Matrix& domination) {
  std::vector<ClassId> out(static_cast<std::size_t>(domination.rows()));
  for (Eigen::Index i = 0; i < domination.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < domination.cols(); ++c)
      if (domination(i, c) > domination(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<ClassId>(best);
  }
  return out;
}

namespace {

void write_trace(std::ostream& out, const PccState& s) {
  nlohmann::json rec;
  rec["sweep"] = s.sweep_count;
  rec["mean_max_domination"] = mean_max_domination(s.domination);
  auto& parts = rec["particles"] = nlohmann::json::array();
  for (const auto& p : s.particles)
    parts.push_back({{"home", p.home}, {"position", p.position}, {"strength", p.strength}});
  out << rec.dump() << '\n';
}

}  // namespace

Prediction pcc_run(const Graph& graph, const LabelVector& labels, std::size_t class_count,
                   const PccConfig& config, std::ostream* trace) {
  PccState state = pcc_init(graph, labels, class_count, config);
  const bool any_unlabeled = std::any_of(labels.begin(), labels.end(), [](const Label& l) { return !l; });

  Prediction out;
  out.converged = true;
  if (any_unlabeled) {
    Rng rng(config.seed);
    const std::size_t cap = config.sweep_cap(state.particles.size());
    double last = mean_max_domination(state.domination);
    out.converged = false;
    while (state.sweep_count < cap) {
      pcc_sweep(state, rng);
      if (trace) write_trace(*trace, state);
      if (state.sweep_count % config.conv_check_interval == 0) {
        const double now = mean_max_domination(state.domination);
        if (std::abs(now - last) < config.conv_epsilon) {
          out.converged = true;
          break;
        }
        last = now;
      }
    }
  }

  out.labels = argmax_labels(state.domination);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) out.labels[i] = *labels[i];
  out.domination = std::move(state.domination);
  out.sweeps = state.sweep_count;
  return out;
}

}  // namespace pcc
