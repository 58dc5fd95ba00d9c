#include <doctest.h>

#include "oracles.hpp"
#include "twostage/dataset.hpp"
#include "twostage/generators.hpp"
#include "twostage/kmeans.hpp"
#include "twostage/pipeline.hpp"

using namespace twostage;

namespace {

PipelineConfig small_config() {
    PipelineConfig c;
    c.som.rows = 6;
    c.som.cols = 6;
    c.ak.n_iter = 60;
    return c;
}

}  // namespace

TEST_CASE("method names round-trip") {
    for (auto m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_WITH_AS(parse_method("somgk"), doctest::Contains("soinak"), std::invalid_argument);
    CHECK(is_two_stage(Method::somak));
    CHECK_FALSE(is_two_stage(Method::kmeans));
}

TEST_CASE("kmeans passthrough equals kmeans_fit") {
    auto [ds, np] = normalize(gen_lines(200, 4, RngSeed{1}));
    auto model = two_stage_fit(ds, Method::kmeans, std::nullopt, PipelineConfig{}, RngSeed{5});
    CHECK(model.stage1.source == PrototypeSource::raw);
    CHECK(model.nc == 4);
    auto km = kmeans_fit(ds.samples, 4, RngSeed{5});
    CHECK(predict_all(model, ds.samples) == km.assignment);
}

TEST_CASE("every method fits and maps prototypes consistently") {
    auto [ds, np] = normalize(gen_simple(60, 10.0, RngSeed{2}));
    for (auto m : kAllMethods) {
        CAPTURE(to_string(m));
        auto model = two_stage_fit(ds, m, std::nullopt, small_config(), RngSeed{3});
        CHECK(model.proto_to_cluster.size() == model.stage1.size());
        for (auto c : model.proto_to_cluster) CHECK(c < model.nc);
        CHECK(all_finite(model.final_centroids));
        if (is_two_stage(m) || m == Method::soinn) {
            for (std::size_t j = 0; j < model.stage1.size(); ++j) {
                CHECK(predict(model, model.stage1.prototypes.row(j)) == model.proto_to_cluster[j]);
            }
        }
    }
}

TEST_CASE("soinak discovers the cluster count without nc") {
    auto [ds, np] = normalize(gen_simple(100, 10.0, RngSeed{0}));
    Dataset unlabeled = ds;
    unlabeled.labels.reset();
    auto model = two_stage_fit(unlabeled, Method::soinak, std::nullopt, small_config(), RngSeed{1});
    REQUIRE(model.stage1.suggested_k);
    CHECK(model.nc == std::min(*model.stage1.suggested_k, model.stage1.size()));
}

TEST_CASE("nc above the prototype count is rejected") {
    auto [ds, np] = normalize(gen_simple(20, 10.0, RngSeed{2}));
    auto cfg = small_config();
    cfg.som.rows = 1;
    cfg.som.cols = 2;
    CHECK_THROWS(two_stage_fit(ds, Method::somk, 5, cfg, RngSeed{1}));
    CHECK_THROWS(two_stage_fit(ds, Method::kmeans, 0, cfg, RngSeed{1}));
}

TEST_CASE("predict: nearest prototype then lookup") {
    PipelineModel m;
    m.method = Method::somk;
    m.stage1.prototypes = Matrix::from_rows({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    m.proto_to_cluster = {0, 0, 1, 1, 1};
    m.nc = 2;
    m.final_centroids = Matrix::from_rows({{0.5, 0}, {3, 0}});
    std::vector<double> x{4, 0};
    CHECK(predict(m, x) == 1);

    Matrix q = oracle::random_points(100, 2, RngSeed{9}, -1, 5);
    auto all = predict_all(m, q);
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(all[i] == m.proto_to_cluster[oracle::nearest(m.stage1.prototypes, q.row(i))]);

    PipelineModel one = m;
    one.proto_to_cluster.assign(5, 0);
    one.nc = 1;
    for (std::size_t i = 0; i < 100; ++i) CHECK(predict(one, q.row(i)) == 0);
}

TEST_CASE("complexity estimate") {
    auto e = complexity_estimate(1000, 158, 31);
    CHECK(e.two_stage < e.direct);
    auto full = complexity_estimate(50, 50, 7);
    CHECK(full.two_stage >= 50.0 * (7 * 8 / 2 - 1));

    for (std::size_t n : {20, 100}) {
        for (std::size_t m : {5, 20}) {
            for (std::size_t c : {2, 5}) {
                double direct = 0, two = static_cast<double>(n * m);
                for (std::size_t k = 2; k <= c; ++k) {
                    direct += static_cast<double>(n * k);
                    two += static_cast<double>(m * k);
                }
                auto r = complexity_estimate(n, m, c);
                CHECK(r.direct == direct);
                CHECK(r.two_stage == two);
            }
        }
    }
    CHECK_THROWS(complexity_estimate(10, 20, 2));
}
