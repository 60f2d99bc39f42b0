#pragma once

#include <cstddef>
#include <cstdint>

#include "pcc/dataset.hpp"

namespace pcc {

// Regular-simplex vertices in R^dim, pairwise distance separation * sigma,
// one row per class.
Matrix blob_centers(std::size_t classes, std::size_t dim, double separation, double sigma);

// C isotropic Gaussian clusters whose centers sit on a regular simplex with
// edge length separation * sigma. Needs dim >= C - 1. Items are grouped by
// class; class sizes differ by at most one.
LabeledDataset gen_blobs(std::size_t n, std::size_t classes, std::size_t dim, double separation,
                         double sigma, std::uint64_t seed);

// Two interleaved unit half-circles with Gaussian noise of the given
// standard deviation. The first ceil(n/2) items form the upper moon.
LabeledDataset gen_moons(std::size_t n, double noise, std::uint64_t seed);

}  // namespace pcc
