#include "twostage/ant_kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twostage/centers.hpp"
#include "twostage/kernels.hpp"

namespace twostage {

void AkParams::validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("ak: alpha must be >= 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("ak: beta must be >= 0");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("ak: rho must lie in (0, 1)");
    if (!(q > 0.0)) throw std::invalid_argument("ak: Q must be > 0");
    if (n_iter == 0) throw std::invalid_argument("ak: n_iter must be >= 1");
    if (n_ants == 0) throw std::invalid_argument("ak: n_ants must be >= 1");
    if (!(perturb_strength > 0.0 && perturb_strength <= 1.0)) {
        throw std::invalid_argument("ak: perturbation strength must lie in (0, 1]");
    }
    if (!(tau0 > 0.0)) throw std::invalid_argument("ak: tau0 must be > 0");
}

double twcv(const Matrix& points, std::span<const std::size_t> assignment, const Matrix& centers) {
    if (assignment.size() != points.rows()) {
        throw std::invalid_argument("twcv: assignment length does not match point count");
    }
    std::vector<double> per_cluster(centers.rows(), 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const std::size_t k = assignment[i];
        if (k >= centers.rows()) throw std::out_of_range("twcv: cluster id out of range");
        per_cluster[k] += squared_distance(points.row(i), centers.row(k));
    }
    double total = 0.0;
    for (double v : per_cluster) total += v;
    return total;
}

std::vector<double> cluster_center(const Matrix& points, std::span<const std::size_t> members) {
    return mean_of_rows(points, members);
}

std::vector<double> choice_probabilities(std::span<const double> tau,
                                         std::span<const double> distances, const AkParams& p) {
    if (tau.size() != distances.size() || tau.empty()) {
        throw std::invalid_argument("choice_probabilities: size mismatch");
    }
    std::vector<double> prob(tau.size(), 0.0);
    for (std::size_t j = 0; j < distances.size(); ++j) {
        if (distances[j] == 0.0) {
            prob[j] = 1.0;
            return prob;
        }
    }
    double total = 0.0;
    for (std::size_t j = 0; j < tau.size(); ++j) {
        prob[j] = std::pow(tau[j], p.alpha) * std::pow(1.0 / distances[j], p.beta);
        total += prob[j];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::domain_error("choice_probabilities: degenerate weights");
    }
    for (auto& v : prob) v /= total;
    return prob;
}

void pheromone_update(Matrix& pheromone, std::span<const std::vector<std::size_t>> ant_assignments,
                      std::span<const double> ant_twcv, const AkParams& p) {
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) throw std::invalid_argument("ak: rho must lie in [0, 1]");
    if (ant_assignments.size() != ant_twcv.size()) {
        throw std::invalid_argument("pheromone_update: one TWCV per ant required");
    }
    for (auto& t : pheromone.data()) t *= (1.0 - p.rho);
    for (std::size_t k = 0; k < ant_assignments.size(); ++k) {
        if (!(ant_twcv[k] > 0.0)) continue;
        const double deposit = p.q / ant_twcv[k];
        const auto& a = ant_assignments[k];
        for (std::size_t i = 0; i < a.size(); ++i) pheromone(i, a[i]) += deposit;
    }
    for (auto& t : pheromone.data()) t = std::max(t, kPheromoneFloor);
}

namespace {

struct Solution {
    std::vector<std::size_t> assignment;
    Matrix centers;
    double twcv = 0.0;
};

Solution settle(const Matrix& points, std::vector<std::size_t> assignment, std::size_t nc) {
    Solution s;
    std::vector<std::size_t> counts;
    s.centers = cluster_means(points, assignment, nc, &counts);
    repair_empty_clusters(points, assignment, s.centers, counts);
    s.twcv = twcv(points, assignment, s.centers);
    s.assignment = std::move(assignment);
    return s;
}

Solution ant_sweep(const Matrix& points, const AkState& state, const AkParams& p, RngSeed seed) {
    Rng rng(seed);
    const std::size_t nc = state.centroids.rows();
    std::vector<std::size_t> assignment(points.rows());
    std::vector<double> dist(nc);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto x = points.row(i);
        for (std::size_t j = 0; j < nc; ++j) dist[j] = distance(x, state.centroids.row(j));
        auto prob = choice_probabilities(state.pheromone.row(i), dist, p);
        const double u = rng.uniform();
        double cum = 0.0;
        std::size_t pick = nc - 1;
        for (std::size_t j = 0; j < nc; ++j) {
            cum += prob[j];
            if (u < cum) {
                pick = j;
                break;
            }
        }
        assignment[i] = pick;
    }
    return settle(points, std::move(assignment), nc);
}

void snapshot_if_better(AkState& s) {
    if (s.twcv < s.best_twcv) {
        s.best_twcv = s.twcv;
        s.best_centroids = s.centroids;
        s.best_assignment = s.assignment;
    }
}

}  // namespace

void perturb(AkState& state, const Matrix& points, Rng& rng, double strength) {
    if (!(strength > 0.0 && strength <= 1.0)) {
        throw std::invalid_argument("perturb: strength must lie in (0, 1]");
    }
    const std::size_t n = points.rows();
    const std::size_t nc = state.centroids.rows();
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(strength * static_cast<double>(n))));
    auto chosen = sample_distinct(n, std::min(count, n), rng);
    auto assignment = state.assignment;
    for (auto i : chosen) {
        assignment[i] = rng.index(nc);
        // Without this the ants would re-impose the locked-in links next sweep.
        if (state.pheromone.rows() == n)
            for (auto& t : state.pheromone.row(i)) t = state.tau0;
    }
    Solution s = settle(points, std::move(assignment), nc);
    state.assignment = std::move(s.assignment);
    state.centroids = std::move(s.centers);
    state.twcv = s.twcv;
    ++state.perturbations;
}

AkState ak_fit(const Matrix& points, std::size_t nc, const Matrix& init_centroids,
               const AkParams& p, RngSeed seed) {
    p.validate();
    const std::size_t n = points.rows();
    if (nc == 0) throw std::invalid_argument("ak: nc must be >= 1");
    if (nc > n) throw std::invalid_argument("ak: nc exceeds the number of objects");
    if (init_centroids.rows() != nc || init_centroids.cols() != points.cols()) {
        throw std::invalid_argument("ak: need nc initial centroids of dimension A");
    }

    AkState state;
    state.tau0 = p.tau0;
    state.pheromone = Matrix(n, nc, p.tau0);
    std::vector<std::size_t> start(n);
    kernels::omp::assign_nearest(points, init_centroids, start);
    Solution s0 = settle(points, std::move(start), nc);
    state.assignment = s0.assignment;
    state.centroids = s0.centers;
    state.twcv = s0.twcv;
    state.best_twcv = s0.twcv;
    state.best_centroids = s0.centers;
    state.best_assignment = s0.assignment;
    if (nc == 1) {
        state.best_history.push_back(state.best_twcv);
        state.iterations = 1;
        return state;
    }

    Rng perturb_rng(derive(seed, {0xfeedULL}));
    double previous = state.twcv;
    std::vector<Solution> ants(p.n_ants);
    for (std::size_t it = 0; it < p.n_iter; ++it) {
        const auto n_ants = static_cast<std::ptrdiff_t>(p.n_ants);
#pragma omp parallel for schedule(static) if (n_ants > 1)
        for (std::ptrdiff_t k = 0; k < n_ants; ++k) {
            ants[static_cast<std::size_t>(k)] =
                ant_sweep(points, state, p, derive(seed, {it, static_cast<std::uint64_t>(k)}));
        }

        std::size_t lead = 0;
        std::vector<std::vector<std::size_t>> chosen(p.n_ants);
        std::vector<double> costs(p.n_ants);
        for (std::size_t k = 0; k < p.n_ants; ++k) {
            if (ants[k].twcv < ants[lead].twcv) lead = k;
            chosen[k] = ants[k].assignment;
            costs[k] = ants[k].twcv;
        }
        pheromone_update(state.pheromone, chosen, costs, p);

        state.assignment = std::move(ants[lead].assignment);
        state.centroids = std::move(ants[lead].centers);
        state.twcv = ants[lead].twcv;
        snapshot_if_better(state);

        if (state.twcv == previous) {
            perturb(state, points, perturb_rng, p.perturb_strength);
            snapshot_if_better(state);
        }
        previous = state.twcv;
        state.best_history.push_back(state.best_twcv);
        state.iterations = it + 1;
        if (state.best_twcv == 0.0) break;
    }
    return state;
}

}  // namespace twostage
