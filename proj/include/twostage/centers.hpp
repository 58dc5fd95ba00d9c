#pragma once

// Helpers shared by the centroid-based clusterers (K-means, Ant K-means, ASCA).

#include <cstddef>
#include <span>
#include <vector>

#include "twostage/matrix.hpp"
#include "twostage/rng.hpp"

namespace twostage {

/// Per-cluster means. Empty clusters keep a zero row and report count 0.
Matrix cluster_means(const Matrix& points, std::span<const std::size_t> assignment,
                     std::size_t k, std::vector<std::size_t>* counts = nullptr);

/// Sum over points of the squared distance to their assigned center.
/// Throws std::out_of_range if an id is not a row of `centers`.
double assigned_sse(const Matrix& points, std::span<const std::size_t> assignment,
                    const Matrix& centers);

/// Gives every empty cluster the point farthest from its own center (taken from
/// a cluster with at least two members) and refreshes the affected centers.
/// Returns the number of clusters repaired.
std::size_t repair_empty_clusters(const Matrix& points, std::vector<std::size_t>& assignment,
                                  Matrix& centers, std::vector<std::size_t>& counts);

/// k distinct row indices drawn uniformly without replacement.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng);

}  // namespace twostage
