#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twostage/dataset.hpp"
#include "twostage/eval.hpp"
#include "twostage/generators.hpp"

using namespace twostage;

TEST_CASE("entropy: worked examples") {
    std::vector<std::size_t> a{0, 0, 1, 1}, l{0, 0, 1, 1};
    CHECK(cluster_entropy(a, l, 2).total_entropy == 0.0);

    std::vector<std::size_t> one(10, 0), half{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    CHECK(cluster_entropy(one, half, 2).total_entropy == 1.0);

    std::vector<std::size_t> ca{0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    std::vector<std::size_t> cl{0, 0, 0, 1, 0, 0, 0, 1, 1, 1};
    auto r = cluster_entropy(ca, cl, 2);
    CHECK(r.total_entropy == doctest::Approx(0.4 * 0.8112781244591328 + 0.6).epsilon(1e-12));
    CHECK(r.per_cluster_size == std::vector<std::size_t>{4, 6});
    CHECK(r.class_given_cluster(0, 0) == 0.75);
}

TEST_CASE("entropy: input errors") {
    std::vector<std::size_t> e;
    CHECK_THROWS(cluster_entropy(e, e, 2));
    std::vector<std::size_t> a{0, 1}, l{0};
    CHECK_THROWS(cluster_entropy(a, l, 2));
    std::vector<std::size_t> l2{0, 3};
    CHECK_THROWS(cluster_entropy(a, l2, 2));
}

TEST_CASE("property: entropy bounds, purity and relabeling") {
    for (std::uint64_t s = 0; s < 2000; ++s) {
        Rng rng(RngSeed{s});
        const std::size_t n = 1 + rng.index(60);
        const std::size_t k = 1 + rng.index(6);
        const std::size_t L = 1 + rng.index(5);
        std::vector<std::size_t> a(n), l(n);
        for (auto& x : a) x = rng.index(k);
        for (auto& x : l) x = rng.index(L);
        auto r = cluster_entropy(a, l, L);
        CHECK(r.total_entropy >= 0.0);
        CHECK(r.total_entropy <= std::log2(static_cast<double>(L)) + 1e-12);

        bool pure = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (a[i] == a[j] && l[i] != l[j]) pure = false;
        CHECK((r.total_entropy == 0.0) == pure);

        std::vector<std::size_t> perm(k);
        for (std::size_t c = 0; c < k; ++c) perm[c] = (c * 5 + s) % k;
        bool bijective = true;
        std::vector<int> hit(k, 0);
        for (auto p : perm) bijective &= hit[p]++ == 0;
        if (!bijective) continue;
        std::vector<std::size_t> b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = perm[a[i]];
        CHECK(cluster_entropy(b, l, L).total_entropy ==
              doctest::Approx(r.total_entropy).epsilon(1e-12));
    }
}

TEST_CASE("summary and confidence interval") {
    std::vector<double> c(30, 0.25);
    auto [lo, hi] = confidence_interval(c);
    CHECK(lo == 0.25);
    CHECK(hi == 0.25);

    std::vector<double> two{0, 1};
    auto [l2, h2] = confidence_interval(two);
    CHECK((h2 - l2) / 2 == doctest::Approx(6.353).epsilon(1e-3));
    CHECK((l2 + h2) / 2 == doctest::Approx(0.5));

    std::vector<double> one{1};
    CHECK_THROWS(confidence_interval(one));

    auto s = summarize(std::vector<double>{1, 2, 3, 4});
    CHECK(s.min == 1);
    CHECK(s.max == 4);
    CHECK(s.mean == 2.5);
    CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("property: interval width shrinks like 1/sqrt(n)") {
    double width[3];
    const std::size_t sizes[3] = {10, 40, 160};
    for (int k = 0; k < 3; ++k) {
        double total = 0;
        for (std::uint64_t s = 0; s < 200; ++s) {
            Rng rng(RngSeed{s * 3 + static_cast<std::uint64_t>(k)});
            std::vector<double> x(sizes[k]);
            for (auto& v : x) v = rng.normal();
            auto [lo, hi] = confidence_interval(x);
            total += hi - lo;
        }
        width[k] = total / 200;
    }
    CHECK(width[0] / width[1] == doctest::Approx(2.0 * 2.262 / 2.023 * 1.0).epsilon(0.1));
    CHECK(width[1] / width[2] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("t-test: worked cases") {
    std::vector<double> a{0.1, 0.2, 0.3, 0.4};
    auto same = t_test(a, a);
    CHECK(same.t_statistic == 0.0);
    CHECK_FALSE(same.significant);

    std::vector<double> z{0, 1e-6, -1e-6, 0}, o{1, 1 + 1e-6, 1 - 1e-6, 1};
    auto sep = t_test(z, o);
    CHECK(sep.significant);
    CHECK(sep.degrees_of_freedom >= 1.0);

    std::vector<double> c1(5, 2.0), c2(5, 2.0), c3(5, 3.0);
    CHECK(t_test(c1, c2).t_statistic == 0.0);
    CHECK_FALSE(t_test(c1, c2).significant);
    CHECK(t_test(c1, c3).significant);
    std::vector<double> one{1};
    CHECK_THROWS(t_test(one, a));
}

TEST_CASE("t-test: Welch statistic by hand") {
    std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10, 12};
    // means 3 and 7, variances 2.5 and 14
    const double se2 = 2.5 / 5 + 14.0 / 6;
    auto r = t_test(a, b);
    CHECK(r.t_statistic == doctest::Approx(-4.0 / std::sqrt(se2)));
    const double df = se2 * se2 / ((2.5 / 5) * (2.5 / 5) / 4 + (14.0 / 6) * (14.0 / 6) / 5);
    CHECK(r.degrees_of_freedom == doctest::Approx(df));
}

TEST_CASE("table csv round trip") {
    EvalReport r;
    r.method = "somak";
    r.dataset = "lines";
    r.entropies = {0.1, 0.2, 0.15};
    finalize_report(r);
    EvalReport q = r;
    q.method = "kmeans";
    q.entropies = {1.0 / 3.0, 0.2, 1e-17};
    finalize_report(q);
    std::vector<EvalReport> rows{r, q};
    auto back = table_from_csv(table_to_csv(rows));
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].method == rows[i].method);
        CHECK(back[i].dataset == rows[i].dataset);
        CHECK(back[i].min == rows[i].min);
        CHECK(back[i].max == rows[i].max);
        CHECK(back[i].mean == rows[i].mean);
        CHECK(back[i].std == rows[i].std);
        CHECK(back[i].ci_low == rows[i].ci_low);
        CHECK(back[i].ci_high == rows[i].ci_high);
    }
    CHECK_THROWS(table_from_csv("nope\n"));
    CHECK_THROWS(table_from_csv("dataset,method,min,max,mean,std,ci_low,ci_high\na,b,1,2\n"));
}

TEST_CASE("run_experiment: protocol, determinism, summary consistency") {
    auto ds = gen_simple(60, 20.0, RngSeed{1});
    ExperimentOptions opt;
    opt.runs = 4;
    opt.k_folds = 5;
    auto r = run_experiment(Method::kmeans, ds, opt, RngSeed{2});
    CHECK(r.entropies.size() == 4);
    CHECK(r.times_seconds.size() == 4);
    CHECK(r.mean < 0.02);
    CHECK(r.min <= r.mean);
    CHECK(r.mean <= r.max);
    CHECK(r.ci_low <= r.mean);
    CHECK(r.mean <= r.ci_high);
    auto s = summarize(r.entropies);
    CHECK(std::abs(s.mean - r.mean) <= 1e-12);
    CHECK(std::abs(s.std - r.std) <= 1e-12);

    auto again = run_experiment(Method::kmeans, ds, opt, RngSeed{2});
    CHECK(again.entropies == r.entropies);

    Dataset unl = ds;
    unl.labels.reset();
    CHECK_THROWS(run_experiment(Method::kmeans, unl, opt, RngSeed{1}));
    opt.runs = 1;
    CHECK_THROWS(run_experiment(Method::kmeans, ds, opt, RngSeed{1}));
}

TEST_CASE("assign_test_fold: empty fold and exact hits") {
    auto [ds, np] = normalize(gen_simple(30, 10.0, RngSeed{1}));
    auto model = two_stage_fit(ds, Method::kmeans, 2, PipelineConfig{}, RngSeed{1});
    CHECK(assign_test_fold(Matrix(0, 2), model).empty());
    auto hits = assign_test_fold(model.final_centroids, model);
    CHECK(hits == std::vector<std::size_t>{0, 1});
}
