#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twostage/dataset.hpp"
#include "twostage/matrix.hpp"
#include "twostage/prototypes.hpp"
#include "twostage/rng.hpp"

namespace twostage {

/// Rows x cols map on a hexagonal lattice: odd rows shifted by half a unit,
/// row pitch sqrt(3)/2, so adjacent units are exactly 1 apart.
struct SomGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Matrix weights;    // one prototype m_i per unit
    Matrix positions;  // lattice coordinates r_i
    bool hexagonal = true;

    std::size_t units() const noexcept { return rows * cols; }
};

enum class SomPhase { rough, fine };

/// One training phase. Within the phase alpha moves geometrically and sigma
/// linearly from start to end, one step per epoch.
struct SomSchedule {
    double alpha_start = 0.5;
    double alpha_end = 0.5;
    double sigma_start = 10.0;
    double sigma_end = 2.0;
    std::size_t epochs = 1;
    SomPhase phase = SomPhase::rough;

    void validate() const;
    double alpha_at(std::size_t epoch) const noexcept;
    double sigma_at(std::size_t epoch) const noexcept;
};

struct SomConfig {
    std::size_t rows = 19;
    std::size_t cols = 17;
    double alpha = 0.5;
    /// Per-epoch multiplicative decay of alpha.
    double alpha_decay = 0.99;
    double sigma_start = 10.0;
    double sigma_end = 2.0;
    std::size_t epochs_rough = 3;
    std::size_t epochs_fine = 10;
};

/// Rough then fine-tuning phases; alpha = alpha0 * decay^epoch and sigma falls
/// linearly from sigma_start to sigma_end across both phases.
std::vector<SomSchedule> default_schedules(const SomConfig& config);

/// Hexagonal lattice coordinates for a rows x cols map.
Matrix hex_positions(std::size_t rows, std::size_t cols);

/// Weights uniform in [-1, 1]^dim.
SomGrid som_init(std::size_t rows, std::size_t cols, std::size_t dim, RngSeed seed);

/// Best matching unit; ties go to the lowest index.
std::size_t bmu(const SomGrid& grid, std::span<const double> x);

/// Sequential training: each epoch visits the samples in a fresh seeded order
/// and pulls every unit toward the sample by alpha * h_bi.
SomGrid som_train(SomGrid grid, const Matrix& samples, std::span<const SomSchedule> schedules,
                  RngSeed seed);

/// sum_i sum_j h_bj ||x_i - m_j||^2 with the kernel at fixed `sigma`.
double som_energy(const SomGrid& grid, const Matrix& samples, double sigma);

/// One prototype per unit that wins at least one sample, in unit order.
/// `unit_of_prototype`, when given, receives the unit index of each prototype.
PrototypeSet som_prototypes(const SomGrid& grid, const Dataset& ds,
                            std::vector<std::size_t>* unit_of_prototype = nullptr);

}  // namespace twostage
