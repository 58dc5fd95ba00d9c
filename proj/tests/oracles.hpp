#pragma once
// Brute-force references shared by the unit tests and the acceptance binary.

#include <cmath>
#include <limits>
#include <vector>

#include "twostage/matrix.hpp"
#include "twostage/rng.hpp"

namespace oracle {

using twostage::Matrix;

inline std::size_t nearest(const Matrix& centers, std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows(); ++c) {
        double d = 0;
        for (std::size_t j = 0; j < x.size(); ++j) d += (x[j] - centers(c, j)) * (x[j] - centers(c, j));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

/// SSE written out from the definition: means recomputed from the assignment.
inline double partition_cost(const Matrix& pts, const std::vector<std::size_t>& a, std::size_t k) {
    double total = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> mean(pts.cols(), 0.0);
        std::size_t n = 0;
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            if (a[i] != c) continue;
            ++n;
            for (std::size_t j = 0; j < pts.cols(); ++j) mean[j] += pts(i, j);
        }
        if (n == 0) continue;
        for (auto& m : mean) m /= static_cast<double>(n);
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            if (a[i] != c) continue;
            for (std::size_t j = 0; j < pts.cols(); ++j) total += (pts(i, j) - mean[j]) * (pts(i, j) - mean[j]);
        }
    }
    return total;
}

/// Minimum SSE over every partition into two non-empty clusters.
inline double best_two_partition(const Matrix& pts) {
    const std::size_t n = pts.rows();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> a(n);
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
        best = std::min(best, partition_cost(pts, a, 2));
    }
    return best;
}

inline Matrix random_points(std::size_t n, std::size_t dim, twostage::RngSeed seed,
                            double lo = -1.0, double hi = 1.0) {
    twostage::Rng rng(seed);
    Matrix m(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace oracle
