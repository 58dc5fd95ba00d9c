#include "twostage/centers.hpp"

#include <numeric>
#include <stdexcept>

namespace twostage {

Matrix cluster_means(const Matrix& points, std::span<const std::size_t> assignment,
                     std::size_t k, std::vector<std::size_t>* counts) {
    Matrix sums(k, points.cols());
    std::vector<std::size_t> n(k, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const std::size_t c = assignment[i];
        if (c >= k) throw std::out_of_range("cluster id out of range");
        auto s = sums.row(c);
        auto x = points.row(i);
        for (std::size_t d = 0; d < s.size(); ++d) s[d] += x[d];
        ++n[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (n[c] == 0) continue;
        const double inv = 1.0 / static_cast<double>(n[c]);
        for (auto& v : sums.row(c)) v *= inv;
    }
    if (counts) *counts = std::move(n);
    return sums;
}

double assigned_sse(const Matrix& points, std::span<const std::size_t> assignment,
                    const Matrix& centers) {
    if (assignment.size() != points.rows()) {
        throw std::invalid_argument("assignment length does not match point count");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        if (assignment[i] >= centers.rows()) throw std::out_of_range("cluster id out of range");
        total += squared_distance(points.row(i), centers.row(assignment[i]));
    }
    return total;
}

std::size_t repair_empty_clusters(const Matrix& points, std::vector<std::size_t>& assignment,
                                  Matrix& centers, std::vector<std::size_t>& counts) {
    std::size_t repaired = 0;
    for (std::size_t c = 0; c < centers.rows(); ++c) {
        if (counts[c] != 0) continue;
        std::size_t far = points.rows();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            const std::size_t own = assignment[i];
            if (counts[own] < 2) continue;
            const double d = squared_distance(points.row(i), centers.row(own));
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == points.rows()) break;  // fewer points than clusters
        const std::size_t donor = assignment[far];
        assignment[far] = c;
        --counts[donor];
        counts[c] = 1;
        auto x = points.row(far);
        std::copy(x.begin(), x.end(), centers.row(c).begin());

        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (assignment[i] == donor) members.push_back(i);
        }
        auto mean = mean_of_rows(points, members);
        std::copy(mean.begin(), mean.end(), centers.row(donor).begin());
        ++repaired;
    }
    return repaired;
}

std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("cannot sample more items than available");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.index(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace twostage
