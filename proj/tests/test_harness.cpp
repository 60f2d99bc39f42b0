#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcc/harness.hpp"
#include "pcc/synth.hpp"
#include "test_util.hpp"

namespace pcc {
namespace {

std::vector<ClassId> sized_classes(std::initializer_list<std::size_t> sizes) {
  std::vector<ClassId> out;
  ClassId c = 0;
  for (std::size_t s : sizes) {
    out.insert(out.end(), s, c);
    ++c;
  }
  return out;
}

std::vector<std::size_t> labeled_per_class(const std::vector<ClassId>& truth, const std::vector<bool>& mask,
                                           std::size_t classes) {
  std::vector<std::size_t> out(classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (mask[i]) ++out[static_cast<std::size_t>(truth[i])];
  return out;
}

TEST(LabeledMask, FullFractionLabelsEverything) {
  const auto truth = sized_classes({4, 6});
  const auto mask = sample_labeled_mask(truth, 2, 1.0, 3);
  EXPECT_TRUE(std::all_of(mask.begin(), mask.end(), [](bool b) { return b; }));
}

TEST(LabeledMask, UnevenClassSizes) {
  const auto truth = sized_classes({175, 167});
  const auto mask = sample_labeled_mask(truth, 2, 0.1, 11);
  EXPECT_EQ(labeled_per_class(truth, mask, 2), (std::vector<std::size_t>{17, 16}));
  EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 33);
}

TEST(LabeledMask, MinimumOnePerClass) {
  const auto truth = sized_classes({3, 3});
  const auto mask = sample_labeled_mask(truth, 2, 0.01, 0);
  EXPECT_EQ(labeled_per_class(truth, mask, 2), (std::vector<std::size_t>{1, 1}));
}

TEST(LabeledMask, EmptyClassAndBadFraction) {
  const auto truth = sized_classes({3, 0, 2});
  EXPECT_THROW(sample_labeled_mask(truth, 3, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(sample_labeled_mask(sized_classes({3, 3}), 2, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(sample_labeled_mask(sized_classes({3, 3}), 2, 1.5, 0), std::invalid_argument);
}

TEST(LabeledMask, StratifiedCountsForEverySeed) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t a = 1 + rng.below(60), b = 1 + rng.below(60), c = 1 + rng.below(60);
    const auto truth = sized_classes({a, b, c});
    const double fraction = 0.01 + 0.99 * rng.uniform();
    const auto mask = sample_labeled_mask(truth, 3, fraction, rng.next());
    const auto counts = labeled_per_class(truth, mask, 3);
    std::size_t i = 0;
    for (std::size_t size : {a, b, c}) {
      const auto expect = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * size + 1e-9)));
      EXPECT_EQ(counts[i++], expect);
    }
  }
}

TEST(LabeledMask, DeterministicAndSeedSensitive) {
  const auto truth = sized_classes({100, 100});
  EXPECT_EQ(sample_labeled_mask(truth, 2, 0.1, 5), sample_labeled_mask(truth, 2, 0.1, 5));
  EXPECT_NE(sample_labeled_mask(truth, 2, 0.1, 5), sample_labeled_mask(truth, 2, 0.1, 6));
}

TEST(Accuracy, Examples) {
  const std::vector<ClassId> truth{0, 1, 1, 0};
  EXPECT_EQ(accuracy(truth, truth, {true, false, false, false}), 1.0);

  std::vector<ClassId> t(342, 0), pred(342, 0);
  std::vector<bool> mask(342, false);
  std::fill(mask.begin(), mask.begin() + 34, true);
  for (std::size_t i = 34; i < 34 + 154; ++i) pred[i] = 1;
  EXPECT_DOUBLE_EQ(accuracy(pred, t, mask), 0.5);

  std::fill(pred.begin(), pred.end(), 0);
  pred[100] = pred[200] = 1;
  EXPECT_NEAR(accuracy(pred, t, mask), 306.0 / 308.0, 1e-15);
  EXPECT_NEAR(accuracy(pred, t, mask), 0.993506, 1e-6);
}

TEST(Accuracy, Errors) {
  const std::vector<ClassId> truth{0, 1};
  EXPECT_THROW(accuracy(truth, truth, {true, true}), std::invalid_argument);
  EXPECT_THROW(accuracy(std::vector<ClassId>{0}, truth, {false, false}), std::invalid_argument);
}

class BlobTrials : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dataset_ = new LabeledDataset(gen_blobs(200, 2, 2, 6.0, 1.0, 4));
    model_ = new PcaModel(pca_fit(dataset_->features, 2));
  }
  static void TearDownTestSuite() {
    delete dataset_;
    delete model_;
  }
  static LabeledDataset* dataset_;
  static PcaModel* model_;
};
LabeledDataset* BlobTrials::dataset_ = nullptr;
PcaModel* BlobTrials::model_ = nullptr;

TEST_F(BlobTrials, FullyLabeledHasNothingToScore) {
  EXPECT_THROW(evaluate_once(*dataset_, *model_, 2, 5, 1.0, 1, PccConfig{}), std::invalid_argument);
}

TEST_F(BlobTrials, SeparatedBlobsScoreHigh) {
  int good = 0;
  constexpr int seeds = 20;
  for (int s = 0; s < seeds; ++s) good += evaluate_once(*dataset_, *model_, 2, 5, 0.1, s, PccConfig{}) >= 0.95;
  EXPECT_GE(good, 18);
}

TEST_F(BlobTrials, SameSeedSameAccuracy) {
  EXPECT_EQ(evaluate_once(*dataset_, *model_, 2, 5, 0.1, 77, PccConfig{}),
            evaluate_once(*dataset_, *model_, 2, 5, 0.1, 77, PccConfig{}));
}

TEST_F(BlobTrials, RequiresGroundTruth) {
  LabeledDataset partial = *dataset_;
  partial.labels[3].reset();
  EXPECT_THROW(evaluate_once(partial, *model_, 2, 5, 0.1, 0, PccConfig{}), std::invalid_argument);
}

TEST_F(BlobTrials, SingletonGridIsMeanOfRepetitions) {
  TrialSpec spec;
  spec.labeled_fraction = 0.1;
  spec.repetitions = 5;
  spec.p_range = {2, 2};
  spec.k_range = {4, 4};
  spec.base_seed = 9;
  const GridResult g = grid_search(*dataset_, spec, PccConfig{});
  ASSERT_EQ(g.cells.size(), 1u);

  const PcaModel full = pca_fit(dataset_->features, 2);
  std::vector<double> scores;
  for (std::size_t rep = 0; rep < 5; ++rep)
    scores.push_back(evaluate_once(*dataset_, full, 2, 4, 0.1, trial_seed(9, 2, 4, rep), PccConfig{}));
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / 5.0;
  EXPECT_DOUBLE_EQ(g.at(2, 4).mean, mean);
  EXPECT_EQ(g.at(2, 4).repetitions, 5u);
  EXPECT_EQ(g.best(), (std::pair<std::size_t, std::size_t>{2, 4}));

  // Exchangeability: any repetition order gives the same statistics.
  std::reverse(scores.begin(), scores.end());
  const double shuffled = std::accumulate(scores.begin(), scores.end(), 0.0) / 5.0;
  double ss = 0.0;
  for (double s : scores) ss += (s - shuffled) * (s - shuffled);
  EXPECT_NEAR(shuffled, g.at(2, 4).mean, 1e-12);
  EXPECT_NEAR(std::sqrt(ss / 4.0), g.at(2, 4).stddev, 1e-12);
}

TEST_F(BlobTrials, GridIsReproducibleAcrossThreadCounts) {
  TrialSpec spec;
  spec.labeled_fraction = 0.1;
  spec.repetitions = 3;
  spec.p_range = {1, 2};
  spec.k_range = {2, 4};
  spec.base_seed = 1;
  const GridResult a = grid_search(*dataset_, spec, PccConfig{}, 1);
  const GridResult b = grid_search(*dataset_, spec, PccConfig{}, 4);
  EXPECT_TRUE(a == b);
  for (const auto& c : a.cells) {
    EXPECT_GE(c.mean, 0.0);
    EXPECT_LE(c.mean, 1.0);
    EXPECT_GE(c.stddev, 0.0);
    EXPECT_LE(c.stddev, 1.0);
  }
  const auto [bp, bk] = a.best();
  for (const auto& c : a.cells) EXPECT_LE(c.mean, a.at(bp, bk).mean);
}

TEST(GridResult, ArgmaxTieBreak) {
  GridResult g{{1, 2}, {1, 3}, std::vector<GridCell>(6)};
  g.at(2, 1).mean = 0.9;
  g.at(1, 3).mean = 0.9;
  g.at(2, 3).mean = 0.9;
  EXPECT_EQ(g.best(), (std::pair<std::size_t, std::size_t>{1, 3}));
  EXPECT_THROW(g.at(3, 1), std::out_of_range);
}

TEST(GridSearch, RejectsBadSpecs) {
  const auto ds = gen_blobs(20, 2, 2, 6.0, 1.0, 1);
  TrialSpec spec;
  spec.repetitions = 1;
  spec.p_range = {1, 1};
  spec.k_range = {1, 20};
  EXPECT_THROW(grid_search(ds, spec, PccConfig{}), std::invalid_argument);
  spec.k_range = {3, 2};
  EXPECT_THROW(grid_search(ds, spec, PccConfig{}), std::invalid_argument);
  spec.k_range = {1, 2};
  spec.p_range = {1, 3};
  EXPECT_THROW(grid_search(ds, spec, PccConfig{}), std::invalid_argument);
}

TEST(Summary, TableShape) {
  TrialSpec spec;
  spec.labeled_fraction = 0.2;
  GridResult g{{1, 1}, {1, 2}, {GridCell{0.5, 0.01, 3}, GridCell{0.7953, 0.024, 3}}};
  EXPECT_EQ(summary_line(spec, "vgg16", g), "labeled=20% features=vgg16 p=1 k=2 accuracy=79.53% stddev=2.40%");
}

}  // namespace
}  // namespace pcc
