#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twostage/matrix.hpp"
#include "twostage/rng.hpp"

namespace twostage {

/// Ant K-means parameters. Defaults: alpha 0.5, beta 1, rho 0.9, Q 1,
/// 500 iterations, 2 ants.
struct AkParams {
    double alpha = 0.5;   // pheromone exponent
    double beta = 1.0;    // visibility exponent
    double rho = 0.9;     // evaporation rate
    double q = 1.0;       // deposit constant
    std::size_t n_iter = 500;
    std::size_t n_ants = 2;
    double perturb_strength = 0.1;
    double tau0 = 1.0;

    void validate() const;
};

/// Lower bound kept on every pheromone entry.
inline constexpr double kPheromoneFloor = 1e-9;

struct AkState {
    Matrix centroids;
    Matrix pheromone;  // N x nc
    double tau0 = 1.0;
    std::vector<std::size_t> assignment;
    double twcv = 0.0;

    double best_twcv = 0.0;
    Matrix best_centroids;
    std::vector<std::size_t> best_assignment;
    /// best_twcv after each iteration.
    std::vector<double> best_history;
    std::size_t iterations = 0;
    std::size_t perturbations = 0;
};

/// Total within-cluster variance: sum over clusters of squared member deviations
/// from that cluster's center.
double twcv(const Matrix& points, std::span<const std::size_t> assignment, const Matrix& centers);

/// Arithmetic mean of the listed rows; throws on an empty subset.
std::vector<double> cluster_center(const Matrix& points, std::span<const std::size_t> members);

/// P_j proportional to tau_j^alpha * (1/d_j)^beta. If some d_j is exactly zero the
/// first such centroid gets probability 1.
std::vector<double> choice_probabilities(std::span<const double> tau,
                                         std::span<const double> distances, const AkParams& p);

/// Evaporates every entry by (1 - rho), then each ant deposits Q / TWCV on the
/// links it chose. Ants with TWCV == 0 deposit nothing. Entries stay >= floor.
void pheromone_update(Matrix& pheromone, std::span<const std::vector<std::size_t>> ant_assignments,
                      std::span<const double> ant_twcv, const AkParams& p);

/// Reassigns a random `strength` fraction of objects (at least one) to uniformly
/// drawn clusters, resets their pheromone rows to tau0 and refreshes centroids
/// and TWCV. The best snapshot is untouched.
void perturb(AkState& state, const Matrix& points, Rng& rng, double strength);

/// Ant K-means from the given starting centroids. Each iteration every ant
/// assigns all objects by sampling the choice probabilities; the lowest-TWCV ant
/// becomes the current solution, pheromone is updated from all ants, and when
/// the TWCV repeats the solution is perturbed.
AkState ak_fit(const Matrix& points, std::size_t nc, const Matrix& init_centroids,
               const AkParams& p, RngSeed seed);

}  // namespace twostage
