#include "pcc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "pcc/parallel.hpp"

namespace pcc {

void TrialSpec::validate() const {
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0))
    throw std::invalid_argument("trial spec: labeled fraction must lie in (0, 1]");
  if (repetitions < 1) throw std::invalid_argument("trial spec: repetitions must be >= 1");
  if (p_range.count() == 0 || p_range.lo < 1) throw std::invalid_argument("trial spec: empty or zero-based p range");
  if (k_range.count() == 0 || k_range.lo < 1) throw std::invalid_argument("trial spec: empty or zero-based k range");
}

const GridCell& GridResult::at(std::size_t p, std::size_t k) const {
  if (p < p_range.lo || p > p_range.hi || k < k_range.lo || k > k_range.hi)
    throw std::out_of_range(fmt::format("grid: cell (p={}, k={}) outside the searched ranges", p, k));
  return cells[(p - p_range.lo) * k_range.count() + (k - k_range.lo)];
}

GridCell& GridResult::at(std::size_t p, std::size_t k) {
  return const_cast<GridCell&>(std::as_const(*this).at(p, k));
}

std::pair<std::size_t, std::size_t> GridResult::best() const {
  if (cells.empty()) throw std::logic_error("grid: no cells");
  std::pair<std::size_t, std::size_t> arg{p_range.lo, k_range.lo};
  double top = at(arg.first, arg.second).mean;
  for (std::size_t p = p_range.lo; p <= p_range.hi; ++p)
    for (std::size_t k = k_range.lo; k <= k_range.hi; ++k)
      if (at(p, k).mean > top) {
        top = at(p, k).mean;
        arg = {p, k};
      }
  return arg;
}

bool operator==(const GridResult& a, const GridResult& b) {
  if (a.p_range.lo != b.p_range.lo || a.p_range.hi != b.p_range.hi || a.k_range.lo != b.k_range.lo ||
      a.k_range.hi != b.k_range.hi || a.cells.size() != b.cells.size())
    return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (a.cells[i].mean != b.cells[i].mean || a.cells[i].stddev != b.cells[i].stddev ||
        a.cells[i].repetitions != b.cells[i].repetitions)
      return false;
  return true;
}

std::vector<bool> sample_labeled_mask(std::span<const ClassId> truth, std::size_t class_count,
                                      double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("labeled mask: fraction must lie in (0, 1]");
  std::vector<std::vector<std::size_t>> members(class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= class_count)
      throw std::invalid_argument(fmt::format("labeled mask: label {} of item {} out of range", truth[i], i));
    members[static_cast<std::size_t>(truth[i])].push_back(i);
  }

  Rng rng(seed);
  std::vector<bool> mask(truth.size(), false);
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& m = members[c];
    if (m.empty()) throw std::invalid_argument(fmt::format("labeled mask: class {} has no members", c));
    // The epsilon keeps products like 0.29 * 100 from flooring to 28.
    auto take = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m.size()) + 1e-9));
    take = std::clamp<std::size_t>(take, 1, m.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.below(m.size() - i);
      std::swap(m[i], m[j]);
      mask[m[i]] = true;
    }
  }
  return mask;
}

double accuracy(std::span<const ClassId> predicted, std::span<const ClassId> truth, const std::vector<bool>& mask) {
  if (predicted.size() != truth.size() || mask.size() != truth.size())
    throw std::invalid_argument("accuracy: prediction, truth and mask lengths differ");
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (mask[i]) continue;
    ++total;
    if (predicted[i] == truth[i]) ++correct;
  }
  if (total == 0) throw std::invalid_argument("accuracy: no unlabeled nodes to score");
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<ClassId> require_truth(const LabeledDataset& dataset) {
  std::vector<ClassId> truth(dataset.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!dataset.labels[i])
      throw std::invalid_argument("evaluation needs every item labeled; item '" + dataset.features.ids[i] +
                                  "' has no label");
    truth[i] = *dataset.labels[i];
  }
  return truth;
}

LabelVector masked_labels(std::span<const ClassId> truth, const std::vector<bool>& mask) {
  LabelVector out(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (mask[i]) out[i] = truth[i];
  return out;
}

double evaluate_on_graph(const Graph& graph, std::span<const ClassId> truth, std::size_t class_count,
                         double fraction, std::uint64_t seed, const PccConfig& config) {
  const auto mask = sample_labeled_mask(truth, class_count, fraction, derive_seed(seed, 0));
  PccConfig run = config;
  run.seed = derive_seed(seed, 1);
  const Prediction pred = pcc_run(graph, masked_labels(truth, mask), class_count, run);
  return accuracy(pred.labels, truth, mask);
}

double evaluate_once(const LabeledDataset& dataset, const PcaModel& model, std::size_t p, std::size_t k,
                     double fraction, std::uint64_t seed, const PccConfig& config) {
  const auto truth = require_truth(dataset);
  const FeatureMatrix reduced = pca_transform(model, dataset.features, p);
  const Graph graph = build_knn_graph(reduced, k);
  return evaluate_on_graph(graph, truth, dataset.class_count(), fraction, seed, config);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t p, std::size_t k, std::size_t rep) {
  return derive_seed(base_seed, p, k, rep);
}

GridResult grid_search(const LabeledDataset& dataset, const TrialSpec& spec, const PccConfig& config,
                       unsigned threads) {
  spec.validate();
  config.validate();
  const auto truth = require_truth(dataset);
  const std::size_t n = dataset.size();
  if (spec.k_range.hi >= n)
    throw std::invalid_argument(fmt::format("grid search: k up to {} needs more than {} items", spec.k_range.hi, n));

  const PcaModel model = pca_fit(dataset.features, spec.p_range.hi);
  if (model.max_components() < spec.p_range.hi)
    throw std::invalid_argument(fmt::format("grid search: data supports at most {} principal components, p range asks for {}",
                                            model.max_components(), spec.p_range.hi));

  const std::size_t np = spec.p_range.count();
  const std::size_t nk = spec.k_range.count();
  const std::size_t reps = spec.repetitions;

  std::vector<FeatureMatrix> reduced(np);
  parallel_for(np, threads, [&](std::size_t i) {
    reduced[i] = pca_transform(model, dataset.features, spec.p_range.lo + i);
  });

  std::vector<Graph> graphs(np * nk);
  parallel_for(np * nk, threads, [&](std::size_t cell) {
    graphs[cell] = build_knn_graph(reduced[cell / nk], spec.k_range.lo + cell % nk);
  });

  std::vector<double> scores(np * nk * reps);
  parallel_for(scores.size(), threads, [&](std::size_t item) {
    const std::size_t cell = item / reps;
    const std::size_t rep = item % reps;
    const std::size_t p = spec.p_range.lo + cell / nk;
    const std::size_t k = spec.k_range.lo + cell % nk;
    scores[item] = evaluate_on_graph(graphs[cell], truth, dataset.class_count(), spec.labeled_fraction,
                                     trial_seed(spec.base_seed, p, k, rep), config);
  });

  GridResult result;
  result.p_range = spec.p_range;
  result.k_range = spec.k_range;
  result.cells.resize(np * nk);
  for (std::size_t cell = 0; cell < np * nk; ++cell) {
    const auto first = scores.begin() + static_cast<std::ptrdiff_t>(cell * reps);
    const auto last = first + static_cast<std::ptrdiff_t>(reps);
    GridCell& out = result.cells[cell];
    out.repetitions = reps;
    out.mean = std::accumulate(first, last, 0.0) / static_cast<double>(reps);
    if (reps > 1) {
      double ss = 0.0;
      for (auto it = first; it != last; ++it) ss += (*it - out.mean) * (*it - out.mean);
      out.stddev = std::sqrt(ss / static_cast<double>(reps - 1));
    }
  }
  return result;
}

std::string summary_line(const TrialSpec& spec, const std::string& tag, const GridResult& result) {
  const auto [p, k] = result.best();
  const GridCell& cell = result.at(p, k);
  return fmt::format("labeled={:g}% features={} p={} k={} accuracy={:.2f}% stddev={:.2f}%",
                     spec.labeled_fraction * 100.0, tag, p, k, cell.mean * 100.0, cell.stddev * 100.0);
}

}  // namespace pcc
