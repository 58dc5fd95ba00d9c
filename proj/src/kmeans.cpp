#include "twostage/kmeans.hpp"

#include <algorithm>
#include <stdexcept>

#include "twostage/centers.hpp"
#include "twostage/kernels.hpp"

namespace twostage {

std::vector<std::size_t> assign_nearest(const Matrix& points, const Matrix& centroids) {
    if (centroids.rows() == 0) throw std::invalid_argument("assign_nearest: no centroids");
    std::vector<std::size_t> out(points.rows());
    kernels::omp::assign_nearest(points, centroids, out);
    return out;
}

double sse(const Matrix& points, std::span<const std::size_t> assignment,
           const Matrix& centroids) {
    return assigned_sse(points, assignment, centroids);
}

Matrix kmeans_plusplus(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    if (k == 0 || k > n) throw std::invalid_argument("kmeans++: need 1 <= k <= N");
    std::vector<std::size_t> chosen{rng.index(n)};
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), points.row(chosen[0]));
    while (chosen.size() < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (u < cum && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            // Every point coincides with a chosen center: take unused indices.
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(pick)));
    }
    return points.select_rows(chosen);
}

KMeansModel kmeans_fit(const Matrix& points, std::size_t k, RngSeed seed,
                       const KMeansOptions& options) {
    const std::size_t n = points.rows();
    if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");

    Matrix start;
    if (options.init) {
        start = *options.init;
        if (start.rows() != k || start.cols() != points.cols() || !all_finite(start)) {
            throw std::invalid_argument("kmeans: init must be k finite vectors of dimension A");
        }
    } else {
        Rng rng(seed);
        start = options.seeding == KMeansSeeding::plusplus
                    ? kmeans_plusplus(points, k, rng)
                    : points.select_rows(sample_distinct(n, k, rng));
    }

    KMeansModel model;
    model.centroids = start;
    std::vector<std::size_t> assignment = assign_nearest(points, start);
    while (true) {
        std::vector<std::size_t> counts;
        Matrix centroids = cluster_means(points, assignment, k, &counts);
        repair_empty_clusters(points, assignment, centroids, counts);
        const double s = assigned_sse(points, assignment, centroids);
        // A rise can only come from rounding in the sum; treat it as converged.
        if (!model.sse_history.empty() && s > model.sse_history.back()) break;

        model.sse_history.push_back(s);
        model.centroids = std::move(centroids);
        model.assignment = assignment;
        ++model.iterations;

        auto next = assign_nearest(points, model.centroids);
        if (next == assignment || model.iterations >= options.max_iter) break;
        assignment = std::move(next);
    }
    return model;
}

KMeansModel kmeans_best_of(const Matrix& points, std::size_t k, std::size_t restarts,
                           RngSeed seed, const KMeansOptions& options) {
    if (restarts == 0) throw std::invalid_argument("kmeans: restarts must be >= 1");
    KMeansModel best;
    for (std::size_t r = 0; r < restarts; ++r) {
        KMeansModel m = kmeans_fit(points, k, r == 0 ? seed : derive(seed, {r}), options);
        if (r == 0 || m.sse() < best.sse()) best = std::move(m);
        if (options.init) break;  // deterministic start: restarts are identical
    }
    return best;
}

}  // namespace twostage
