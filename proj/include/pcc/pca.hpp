#pragma once

#include <cstddef>

#include "pcc/dataset.hpp"

namespace pcc {

/// Fitted principal component analysis transform.
///
/// `components` holds one unit-length principal direction per row, ordered
/// by descending explained variance. Each row is sign-normalized so that its
/// entry of largest magnitude is positive. Variances use 1/(n-1).
struct PcaModel {
  Vector mean;
  Matrix components;
  Vector explained_variance;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
  std::size_t max_components() const { return static_cast<std::size_t>(components.rows()); }
};

// Centers the data (no scaling) and extracts the top `p_max` principal
// directions. A request above min(n-1, d) is clamped with a warning.
PcaModel pca_fit(const Matrix& x, std::size_t p_max);
PcaModel pca_fit(const FeatureMatrix& x, std::size_t p_max);

// Projects rows onto the first `p` components: (x - mean) * components[:p]^T.
Matrix pca_transform(const PcaModel& model, const Matrix& x, std::size_t p);

// Result keeps the input ids.
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x, std::size_t p);

}  // namespace pcc
