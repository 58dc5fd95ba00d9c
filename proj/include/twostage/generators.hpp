#pragma once

#include <cstddef>

#include "twostage/dataset.hpp"
#include "twostage/rng.hpp"

namespace twostage {

/// Horizontal segments of unit length, one per class: segment s spans
/// x in [3s, 3s + 1] at height s, with small perpendicular jitter. Points are dealt round-robin so class sizes differ by at most one.
Dataset gen_lines(std::size_t n_total, std::size_t n_segments, RngSeed seed);

/// Radius of the banana arcs.
inline constexpr double kBananaRadius = 5.0;

/// Two interlocking half-circle arcs of radius 5 (class 0 upper arc centred on
/// the origin, class 1 lower arc centred at (5, 2.5)) plus isotropic N(0, s^2).
Dataset gen_banana(std::size_t n_per_class, double s, RngSeed seed);

/// Class 0: means (1, 0), variances (1, 0.25). Class 1: means (0.01, 0), variances (1, 4).
Dataset gen_highleyman(std::size_t n_per_class, RngSeed seed);

/// Class 0: N([u, 0], I). Class 1: N(0, diag(4, 1)).
Dataset gen_spherical(std::size_t n_per_class, double u, RngSeed seed);

/// Two unit-covariance Gaussians with means (0, 0) and (d, 0).
Dataset gen_simple(std::size_t n_per_class, double d, RngSeed seed);

}  // namespace twostage
