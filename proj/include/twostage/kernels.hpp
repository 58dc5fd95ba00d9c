#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both must return
// bit-identical results (tests compare them, bench/ times them).

#include <cstddef>
#include <span>

#include "twostage/matrix.hpp"

namespace twostage::kernels {

/// Index of the nearest row of `centers` to `x`; ties go to the lowest index.
std::size_t nearest_row(const Matrix& centers, std::span<const double> x) noexcept;

/// Gaussian lattice kernel exp(-d^2 / (2 sigma^2)) for squared lattice distance d^2.
double lattice_kernel(double lattice_sq_dist, double sigma) noexcept;

namespace serial {

/// out[i] = nearest row of `centers` to row i of `points`. If `sq_dist` is
/// non-empty it receives the squared distance to that row.
void assign_nearest(const Matrix& points, const Matrix& centers, std::span<std::size_t> out,
                    std::span<double> sq_dist = {});

/// m_i += alpha * h(b, i) * (x - m_i) for every unit i.
void som_update(Matrix& weights, const Matrix& positions, std::size_t bmu,
                std::span<const double> x, double alpha, double sigma);

}  // namespace serial

namespace omp {

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<std::size_t> out,
                    std::span<double> sq_dist = {});

void som_update(Matrix& weights, const Matrix& positions, std::size_t bmu,
                std::span<const double> x, double alpha, double sigma);

}  // namespace omp

}  // namespace twostage::kernels
