#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/engine.hpp"
#include "pcc/pca.hpp"

namespace pcc {

struct IntRange {
  std::size_t lo = 1;
  std::size_t hi = 1;

  std::size_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

struct TrialSpec {
  double labeled_fraction = 0.1;
  std::size_t repetitions = 100;
  IntRange p_range{1, 20};
  IntRange k_range{1, 20};
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct GridCell {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single repetition
  std::size_t repetitions = 0;
};

/// Accuracy statistics for every (p, k) pair of a grid search.
struct GridResult {
  IntRange p_range;
  IntRange k_range;
  std::vector<GridCell> cells;  // p-major

  const GridCell& at(std::size_t p, std::size_t k) const;
  GridCell& at(std::size_t p, std::size_t k);

  // Highest mean; ties go to the smallest p, then the smallest k.
  std::pair<std::size_t, std::size_t> best() const;

  friend bool operator==(const GridResult&, const GridResult&);
};

// Stratified labeled subset: per class, floor(fraction * size) members drawn
// uniformly without replacement, at least one per class.
std::vector<bool> sample_labeled_mask(std::span<const ClassId> truth, std::size_t class_count,
                                      double fraction, std::uint64_t seed);

// Fraction of correct predictions among nodes with mask == false.
double accuracy(std::span<const ClassId> predicted, std::span<const ClassId> truth,
                const std::vector<bool>& mask);

// Ground-truth labels of a fully labeled dataset; throws if any item is unlabeled.
std::vector<ClassId> require_truth(const LabeledDataset& dataset);

LabelVector masked_labels(std::span<const ClassId> truth, const std::vector<bool>& mask);

// PCA projection -> k-NN graph -> stratified mask -> PCC -> accuracy.
double evaluate_once(const LabeledDataset& dataset, const PcaModel& model, std::size_t p, std::size_t k,
                     double fraction, std::uint64_t trial_seed, const PccConfig& config);

// Same trial on a prebuilt graph. The mask and engine streams are derived
// from `trial_seed`, so both entry points agree for the same inputs.
double evaluate_on_graph(const Graph& graph, std::span<const ClassId> truth, std::size_t class_count,
                         double fraction, std::uint64_t trial_seed, const PccConfig& config);

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t p, std::size_t k, std::size_t rep);

GridResult grid_search(const LabeledDataset& dataset, const TrialSpec& spec, const PccConfig& config,
                       unsigned threads = 1);

// One-line report: labeled fraction, feature tag, best p and k, mean and stddev.
std::string summary_line(const TrialSpec& spec, const std::string& tag, const GridResult& result);

}  // namespace pcc
