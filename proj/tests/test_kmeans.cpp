#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "twostage/centers.hpp"
#include "twostage/kmeans.hpp"

using namespace twostage;

TEST_CASE("kmeans: symmetric pairs") {
    Matrix pts = Matrix::from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    auto m = kmeans_fit(pts, 2, RngSeed{1});
    CHECK(m.sse() == doctest::Approx(1.0));
    std::vector<std::vector<double>> c{{m.centroids(0, 0), m.centroids(0, 1)},
                                       {m.centroids(1, 0), m.centroids(1, 1)}};
    std::sort(c.begin(), c.end());
    CHECK(c[0] == std::vector<double>{0, 0.5});
    CHECK(c[1] == std::vector<double>{10, 0.5});
}

TEST_CASE("kmeans: k = N is an exact cover") {
    Matrix pts = oracle::random_points(9, 2, RngSeed{3});
    auto m = kmeans_fit(pts, 9, RngSeed{4});
    CHECK(m.sse() == 0.0);
}

TEST_CASE("kmeans: argument errors") {
    Matrix pts = oracle::random_points(4, 2, RngSeed{3});
    CHECK_THROWS(kmeans_fit(pts, 0, RngSeed{1}));
    CHECK_THROWS(kmeans_fit(pts, 5, RngSeed{1}));
    KMeansOptions bad;
    bad.init = Matrix(2, 3);
    CHECK_THROWS(kmeans_fit(pts, 2, RngSeed{1}, bad));
}

TEST_CASE("kmeans: best of 20 restarts reaches the brute-force optimum") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        Matrix pts = oracle::random_points(8, 1, RngSeed{s}, 0.0, 10.0);
        auto m = kmeans_best_of(pts, 2, 20, RngSeed{s + 1000});
        CHECK(m.sse() == doctest::Approx(oracle::best_two_partition(pts)).epsilon(1e-12));
    }
}

TEST_CASE("sse: worked examples and definition") {
    Matrix one = Matrix::from_rows({{3, 4}});
    std::vector<std::size_t> a0{0};
    CHECK(sse(one, a0, one) == 0.0);
    Matrix pts = Matrix::from_rows({{0}, {2}});
    Matrix c = Matrix::from_rows({{1}});
    std::vector<std::size_t> a{0, 0};
    CHECK(sse(pts, a, c) == 2.0);
    std::vector<std::size_t> bad{0, 1};
    CHECK_THROWS(sse(pts, bad, c));

    Matrix r = oracle::random_points(40, 3, RngSeed{2});
    std::vector<std::size_t> ra(40);
    for (std::size_t i = 0; i < 40; ++i) ra[i] = i % 4;
    Matrix means = cluster_means(r, ra, 4);
    CHECK(sse(r, ra, means) == doctest::Approx(oracle::partition_cost(r, ra, 4)).epsilon(1e-12));
}

TEST_CASE("assign_nearest: exact hit, tie and grid oracle") {
    Matrix c = Matrix::from_rows({{0, 0}, {2, 0}, {7, 7}});
    Matrix q = Matrix::from_rows({{7, 7}, {1, 0}});
    auto a = assign_nearest(q, c);
    CHECK(a[0] == 2);
    CHECK(a[1] == 0);

    Matrix grid(100, 2);
    for (std::size_t i = 0; i < 100; ++i) {
        grid(i, 0) = static_cast<double>(i % 10) * 0.7;
        grid(i, 1) = static_cast<double>(i / 10) * 0.7;
    }
    auto g = assign_nearest(grid, c);
    for (std::size_t i = 0; i < 100; ++i) CHECK(g[i] == oracle::nearest(c, grid.row(i)));
}

TEST_CASE("property: sse_history never increases") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(RngSeed{s});
        const std::size_t n = 5 + rng.index(80);
        const std::size_t k = 1 + rng.index(std::min<std::size_t>(n, 8));
        Matrix pts = oracle::random_points(n, 1 + rng.index(4), RngSeed{s + 7});
        KMeansOptions opt;
        opt.seeding = s % 2 ? KMeansSeeding::random : KMeansSeeding::plusplus;
        auto m = kmeans_fit(pts, k, RngSeed{s}, opt);
        for (std::size_t i = 1; i < m.sse_history.size(); ++i) {
            CHECK(m.sse_history[i] <= m.sse_history[i - 1]);
        }
        for (auto id : m.assignment) CHECK(id < k);
        CHECK(all_finite(m.centroids));
    }
}

TEST_CASE("property: a converged model is a fixed point") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        Matrix pts = oracle::random_points(60, 2, RngSeed{s});
        auto m = kmeans_fit(pts, 4, RngSeed{s});
        KMeansOptions again;
        again.init = m.centroids;
        auto m2 = kmeans_fit(pts, 4, RngSeed{s}, again);
        CHECK(m2.assignment == m.assignment);
        CHECK(m2.centroids == m.centroids);
    }
}

TEST_CASE("property: permuting rows permutes the assignment") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Matrix pts = oracle::random_points(50, 2, RngSeed{s});
        KMeansOptions opt;
        opt.init = Matrix::from_rows({{-0.5, -0.5}, {0.5, 0.5}, {0.5, -0.5}});
        auto m = kmeans_fit(pts, 3, RngSeed{1}, opt);
        std::vector<std::size_t> perm(50);
        for (std::size_t i = 0; i < 50; ++i) perm[i] = (i * 17 + s) % 50;
        auto m2 = kmeans_fit(pts.select_rows(perm), 3, RngSeed{1}, opt);
        for (std::size_t i = 0; i < 50; ++i) CHECK(m2.assignment[i] == m.assignment[perm[i]]);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(m2.centroids(c, j) == doctest::Approx(m.centroids(c, j)).epsilon(1e-9));
    }
}

TEST_CASE("kmeans++ picks distinct points") {
    Matrix pts = Matrix::from_rows({{0}, {0}, {0}, {1}});
    Rng rng(RngSeed{1});
    auto c = kmeans_plusplus(pts, 2, rng);
    CHECK(c(0, 0) != c(1, 0));
    Matrix same = Matrix::from_rows({{2}, {2}, {2}});
    Rng rng2(RngSeed{1});
    auto c2 = kmeans_plusplus(same, 3, rng2);
    CHECK(c2.rows() == 3);
}

TEST_CASE("empty cluster repair") {
    Matrix pts = Matrix::from_rows({{0}, {1}, {10}});
    std::vector<std::size_t> a{0, 0, 0};
    std::vector<std::size_t> counts;
    Matrix centers = cluster_means(pts, a, 2, &counts);
    CHECK(counts[1] == 0);
    CHECK(repair_empty_clusters(pts, a, centers, counts) == 1);
    CHECK(a[2] == 1);
    CHECK(centers(1, 0) == 10.0);
    CHECK(centers(0, 0) == 0.5);
}
