#include "twostage/kernels.hpp"

#include <cmath>
#include <limits>

namespace twostage::kernels {

std::size_t nearest_row(const Matrix& centers, std::span<const double> x) noexcept {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.rows(); ++j) {
        const double d = squared_distance(x, centers.row(j));
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

double lattice_kernel(double lattice_sq_dist, double sigma) noexcept {
    return std::exp(-lattice_sq_dist / (2.0 * sigma * sigma));
}

namespace {

inline void assign_one(const Matrix& points, const Matrix& centers, std::size_t i,
                       std::span<std::size_t> out, std::span<double> sq_dist) noexcept {
    auto x = points.row(i);
    const std::size_t j = nearest_row(centers, x);
    out[i] = j;
    if (!sq_dist.empty()) sq_dist[i] = squared_distance(x, centers.row(j));
}

inline void update_unit(Matrix& weights, const Matrix& positions, std::size_t bmu,
                        std::size_t i, std::span<const double> x, double alpha,
                        double sigma) noexcept {
    const double h = lattice_kernel(squared_distance(positions.row(bmu), positions.row(i)), sigma);
    const double step = alpha * h;
    auto m = weights.row(i);
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += step * (x[d] - m[d]);
}

}  // namespace

namespace serial {

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<std::size_t> out,
                    std::span<double> sq_dist) {
    for (std::size_t i = 0; i < points.rows(); ++i) assign_one(points, centers, i, out, sq_dist);
}

void som_update(Matrix& weights, const Matrix& positions, std::size_t bmu,
                std::span<const double> x, double alpha, double sigma) {
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        update_unit(weights, positions, bmu, i, x, alpha, sigma);
    }
}

}  // namespace serial

namespace omp {

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<std::size_t> out,
                    std::span<double> sq_dist) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) if (n > 512)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        assign_one(points, centers, static_cast<std::size_t>(i), out, sq_dist);
    }
}

void som_update(Matrix& weights, const Matrix& positions, std::size_t bmu,
                std::span<const double> x, double alpha, double sigma) {
    const auto m = static_cast<std::ptrdiff_t>(weights.rows());
#pragma omp parallel for schedule(static) if (m > 256)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        update_unit(weights, positions, bmu, static_cast<std::size_t>(i), x, alpha, sigma);
    }
}

}  // namespace omp

}  // namespace twostage::kernels
