#include "twostage/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "twostage/kernels.hpp"

namespace twostage {

void SomSchedule::validate() const {
    if (!(alpha_start > 0.0 && alpha_start <= 1.0 && alpha_end > 0.0 && alpha_end <= 1.0)) {
        throw std::invalid_argument("som schedule: alpha must lie in (0, 1]");
    }
    if (!(sigma_end > 0.0) || sigma_end > sigma_start) {
        throw std::invalid_argument("som schedule: need 0 < sigma_end <= sigma_start");
    }
    if (epochs == 0) throw std::invalid_argument("som schedule: epochs must be >= 1");
}

double SomSchedule::alpha_at(std::size_t epoch) const noexcept {
    if (epochs <= 1) return alpha_start;
    const double f = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
    return alpha_start * std::pow(alpha_end / alpha_start, f);
}

double SomSchedule::sigma_at(std::size_t epoch) const noexcept {
    if (epochs <= 1) return sigma_start;
    const double f = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
    return sigma_start + (sigma_end - sigma_start) * f;
}

std::vector<SomSchedule> default_schedules(const SomConfig& config) {
    const std::size_t total = config.epochs_rough + config.epochs_fine;
    if (total == 0) throw std::invalid_argument("som: no training epochs");
    auto alpha = [&](std::size_t g) {
        return config.alpha * std::pow(config.alpha_decay, static_cast<double>(g));
    };
    auto sigma = [&](std::size_t g) {
        if (total == 1) return config.sigma_start;
        return config.sigma_start + (config.sigma_end - config.sigma_start) *
                                        static_cast<double>(g) / static_cast<double>(total - 1);
    };
    std::vector<SomSchedule> out;
    std::size_t g = 0;
    for (auto [epochs, phase] : {std::pair{config.epochs_rough, SomPhase::rough},
                                 std::pair{config.epochs_fine, SomPhase::fine}}) {
        if (epochs == 0) continue;
        SomSchedule s;
        s.alpha_start = alpha(g);
        s.alpha_end = alpha(g + epochs - 1);
        s.sigma_start = sigma(g);
        s.sigma_end = sigma(g + epochs - 1);
        s.epochs = epochs;
        s.phase = phase;
        out.push_back(s);
        g += epochs;
    }
    return out;
}

Matrix hex_positions(std::size_t rows, std::size_t cols) {
    Matrix pos(rows * cols, 2);
    const double pitch = std::sqrt(3.0) / 2.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            pos(i, 0) = static_cast<double>(c) + (r % 2 == 1 ? 0.5 : 0.0);
            pos(i, 1) = static_cast<double>(r) * pitch;
        }
    }
    return pos;
}

SomGrid som_init(std::size_t rows, std::size_t cols, std::size_t dim, RngSeed seed) {
    if (rows == 0 || cols == 0 || dim == 0) {
        throw std::invalid_argument("som_init: rows, cols and dim must be >= 1");
    }
    SomGrid g;
    g.rows = rows;
    g.cols = cols;
    g.positions = hex_positions(rows, cols);
    g.weights = Matrix(rows * cols, dim);
    Rng rng(seed);
    for (auto& w : g.weights.data()) w = rng.uniform(-1.0, 1.0);
    return g;
}

std::size_t bmu(const SomGrid& grid, std::span<const double> x) {
    if (x.size() != grid.weights.cols()) throw std::invalid_argument("bmu: dimension mismatch");
    return kernels::nearest_row(grid.weights, x);
}

SomGrid som_train(SomGrid grid, const Matrix& samples, std::span<const SomSchedule> schedules,
                  RngSeed seed) {
    if (samples.rows() == 0) throw std::invalid_argument("som_train: empty dataset");
    if (schedules.empty()) throw std::invalid_argument("som_train: no schedules");
    if (samples.cols() != grid.weights.cols()) {
        throw std::invalid_argument("som_train: dimension mismatch");
    }
    for (const auto& s : schedules) s.validate();

    Rng rng(seed);
    std::vector<std::size_t> order(samples.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (const auto& schedule : schedules) {
        for (std::size_t e = 0; e < schedule.epochs; ++e) {
            const double alpha = schedule.alpha_at(e);
            const double sigma = schedule.sigma_at(e);
            std::shuffle(order.begin(), order.end(), rng.engine());
            for (auto i : order) {
                auto x = samples.row(i);
                const std::size_t b = kernels::nearest_row(grid.weights, x);
                kernels::omp::som_update(grid.weights, grid.positions, b, x, alpha, sigma);
            }
        }
    }
    return grid;
}

double som_energy(const SomGrid& grid, const Matrix& samples, double sigma) {
    if (samples.rows() == 0) throw std::invalid_argument("som_energy: empty dataset");
    double e = 0.0;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        auto x = samples.row(i);
        const std::size_t b = kernels::nearest_row(grid.weights, x);
        for (std::size_t j = 0; j < grid.units(); ++j) {
            const double h = kernels::lattice_kernel(
                squared_distance(grid.positions.row(b), grid.positions.row(j)), sigma);
            e += h * squared_distance(x, grid.weights.row(j));
        }
    }
    return e;
}

PrototypeSet som_prototypes(const SomGrid& grid, const Dataset& ds,
                            std::vector<std::size_t>* unit_of_prototype) {
    std::vector<std::size_t> hits(grid.units(), 0);
    std::vector<std::size_t> sample_unit(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sample_unit[i] = bmu(grid, ds.samples.row(i));
        ++hits[sample_unit[i]];
    }
    std::vector<std::size_t> proto_of_unit(grid.units(), 0);
    std::vector<std::size_t> units;
    for (std::size_t u = 0; u < grid.units(); ++u) {
        if (hits[u] == 0) continue;
        proto_of_unit[u] = units.size();
        units.push_back(u);
    }

    PrototypeSet out;
    out.source = PrototypeSource::som;
    out.prototypes = grid.weights.select_rows(units);
    if (ds.labels) {
        std::vector<std::size_t> sample_proto(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) sample_proto[i] = proto_of_unit[sample_unit[i]];
        out.majority_labels = majority_labels(sample_proto, *ds.labels, units.size());
    }
    if (unit_of_prototype) *unit_of_prototype = std::move(units);
    return out;
}

}  // namespace twostage
