#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "twostage/matrix.hpp"
#include "twostage/rng.hpp"

namespace twostage {

enum class KMeansSeeding { random, plusplus };

struct KMeansOptions {
    /// k starting centroids; drawn by `seeding` when absent.
    std::optional<Matrix> init;
    /// random: k distinct data points; plusplus: D^2-weighted (k-means++).
    KMeansSeeding seeding = KMeansSeeding::plusplus;
    std::size_t max_iter = 300;
};

struct KMeansModel {
    Matrix centroids;
    std::vector<std::size_t> assignment;
    /// SSE after each centroid update; non-increasing.
    std::vector<double> sse_history;
    std::size_t iterations = 0;

    double sse() const noexcept { return sse_history.empty() ? 0.0 : sse_history.back(); }
};

/// k-means++ seeding: first center uniform, each next one drawn with
/// probability proportional to the squared distance to the nearest chosen one.
Matrix kmeans_plusplus(const Matrix& points, std::size_t k, Rng& rng);

/// Nearest centroid per point (Euclidean, lowest index on ties).
std::vector<std::size_t> assign_nearest(const Matrix& points, const Matrix& centroids);

/// Within-cluster sum of squared distances of each point to its assigned centroid.
double sse(const Matrix& points, std::span<const std::size_t> assignment,
           const Matrix& centroids);

/// Lloyd iteration until the assignment (and hence every centroid) stops
/// changing, or max_iter centroid updates.
KMeansModel kmeans_fit(const Matrix& points, std::size_t k, RngSeed seed,
                       const KMeansOptions& options = {});

/// Lowest-SSE model over `restarts` independently seeded runs.
KMeansModel kmeans_best_of(const Matrix& points, std::size_t k, std::size_t restarts,
                           RngSeed seed, const KMeansOptions& options = {});

}  // namespace twostage
