#include <doctest.h>

#include "oracles.hpp"
#include "twostage/bundle.hpp"
#include "twostage/config.hpp"
#include "twostage/dataset.hpp"
#include "twostage/generators.hpp"
#include "twostage/json_io.hpp"

using namespace twostage;

TEST_CASE("json: pipeline model round trip") {
    auto [ds, np] = normalize(gen_simple(40, 10.0, RngSeed{1}));
    PipelineConfig cfg;
    cfg.som.rows = 5;
    cfg.som.cols = 5;
    cfg.ak.n_iter = 20;
    for (auto m : {Method::somak, Method::soinak, Method::kmeans}) {
        auto model = two_stage_fit(ds, m, std::nullopt, cfg, RngSeed{2});
        json j = model;
        auto back = json::parse(j.dump()).get<PipelineModel>();
        CHECK(back.method == model.method);
        CHECK(back.nc == model.nc);
        CHECK(back.stage1.prototypes == model.stage1.prototypes);
        CHECK(back.stage1.majority_labels == model.stage1.majority_labels);
        CHECK(back.stage1.suggested_k == model.stage1.suggested_k);
        CHECK(back.final_centroids == model.final_centroids);
        CHECK(back.proto_to_cluster == model.proto_to_cluster);
        CHECK(predict_all(back, ds.samples) == predict_all(model, ds.samples));
    }
    json bad = json::parse(R"({"method":"kmeans","nc":1,"stage1":{"source":"raw","prototypes":[[0]],
        "majority_labels":null,"suggested_k":null},"final_centroids":[[0]],"proto_to_cluster":[3]})");
    CHECK_THROWS(bad.get<PipelineModel>());
}

TEST_CASE("json: soinn graph keeps nodes, edges and ages") {
    auto [ds, np] = normalize(gen_simple(50, 10.0, RngSeed{3}));
    SoinnParams p;
    auto g = soinn_layer(ds.samples, 150, p, std::nullopt, RngSeed{4});
    label_groups(g);
    json j = g;
    CHECK(j["nodes"][0].contains("W"));
    CHECK(j["nodes"][0].contains("R"));
    auto back = j.get<SoinnGraph>();
    REQUIRE(back.node_count() == g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK(back.nodes[i].weight == g.nodes[i].weight);
        CHECK(back.nodes[i].local_error == g.nodes[i].local_error);
        CHECK(back.nodes[i].density == g.nodes[i].density);
        CHECK(back.nodes[i].group_label == g.nodes[i].group_label);
    }
    const auto ea = g.edges(), eb = back.edges();
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(ea[i].a == eb[i].a);
        CHECK(ea[i].b == eb[i].b);
        CHECK(ea[i].age == eb[i].age);
    }
    CHECK(back.group_count == g.group_count);
}

TEST_CASE("json: other models survive a round trip") {
    Matrix pts = oracle::random_points(30, 2, RngSeed{5});
    auto km = kmeans_fit(pts, 3, RngSeed{1});
    auto km2 = json(km).get<KMeansModel>();
    CHECK(km2.centroids == km.centroids);
    CHECK(km2.sse_history == km.sse_history);

    auto grid = som_init(3, 4, 2, RngSeed{1});
    auto grid2 = json(grid).get<SomGrid>();
    CHECK(grid2.weights == grid.weights);
    CHECK(grid2.rows == 3);

    AkParams p;
    p.n_iter = 10;
    auto st = ak_fit(pts, 2, pts.select_rows(std::vector<std::size_t>{0, 1}), p, RngSeed{2});
    auto st2 = json(st).get<AkState>();
    CHECK(st2.pheromone == st.pheromone);
    CHECK(st2.best_twcv == st.best_twcv);

    Dataset ds;
    ds.samples = pts;
    auto [c, ps] = asca_fit(ds, AscaParams{}, RngSeed{3});
    c.assignment[0] = kRemoved;
    auto c2 = json(c).get<AscaClustering>();
    CHECK(c2.assignment == c.assignment);
    CHECK(c2.trace == c.trace);

    EvalReport r;
    r.method = "somk";
    r.dataset = "x";
    r.entropies = {0.1, 0.3};
    finalize_report(r);
    auto r2 = json(r).get<EvalReport>();
    CHECK(r2.entropies == r.entropies);
    CHECK(r2.ci_high == r.ci_high);
}

TEST_CASE("config: defaults, parse, canonical form") {
    auto c = parse_config(R"(
[run]
seed = 42
runs = 5
methods = kmeans, soinak
datasets = lines:n=200, simple:d=20

[soinn]
lambda = 50
age_dead = 30

[ak]
iterations = 100
)");
    CHECK(c.seed == 42);
    CHECK(c.runs == 5);
    CHECK(c.k_folds == 10);
    CHECK(c.methods == std::vector<Method>{Method::kmeans, Method::soinak});
    CHECK(c.datasets == std::vector<std::string>{"lines:n=200", "simple:d=20"});
    CHECK(c.pipeline.soinn.lambda == 50);
    CHECK(c.pipeline.ak.n_iter == 100);
    CHECK(c.pipeline.som.rows == 19);

    auto again = parse_config(config_to_ini(c));
    CHECK(config_to_ini(again) == config_to_ini(c));
    CHECK(config_to_ini(parse_config(config_to_ini(ExperimentConfig{}))) ==
          config_to_ini(ExperimentConfig{}));
}

TEST_CASE("config: errors name the field") {
    CHECK_THROWS_WITH_AS(parse_config("[soinn]\nlambda = 0\n"), doctest::Contains("soinn"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[ak]\nrho = 2\n"), doctest::Contains("ak"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[som]\nrows = x\n"), doctest::Contains("som.rows"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[run]\nruns = 1\n"), doctest::Contains("run.runs"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[run]\nmethods = somgk\n"), doctest::Contains("run.methods"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[run]\ncolour = red\n"), doctest::Contains("run.colour"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("[run\n"), ConfigError);
}

TEST_CASE("config: overrides") {
    ExperimentConfig c;
    set_config_value(c, "soinn", "lt", "400");
    CHECK(c.pipeline.soinn.lt == 400u);
    set_config_value(c, "soinn", "lt", "auto");
    CHECK_FALSE(c.pipeline.soinn.lt);
    set_config_value(c, "run", "nc", "3");
    CHECK(c.nc == 3u);
    CHECK_THROWS_AS(set_config_value(c, "som", "shape", "torus"), ConfigError);
}

TEST_CASE("datasets: generator specs") {
    auto ds = resolve_dataset("lines:n=50:segments=5", RngSeed{1});
    CHECK(ds.size() == 50);
    CHECK(ds.n_classes() == 5);
    CHECK(to_csv(resolve_dataset("lines:n=50:segments=5", RngSeed{1})) == to_csv(ds));
    CHECK(to_csv(resolve_dataset("lines:n=50:segments=5:seed=9", RngSeed{1})) ==
          to_csv(gen_lines(50, 5, RngSeed{9})));
    CHECK_THROWS_WITH_AS(resolve_dataset("moons", RngSeed{1}), doctest::Contains("highleyman"),
                         ConfigError);
    CHECK_THROWS_AS(resolve_dataset("lines:k=3", RngSeed{1}), ConfigError);
    CHECK_THROWS_AS(resolve_dataset("lines:n", RngSeed{1}), ConfigError);
    CHECK_THROWS_WITH_AS(resolve_dataset("/no/such/file.csv", RngSeed{1}),
                         doctest::Contains("/no/such/file.csv"), ConfigError);
}

TEST_CASE("bundle: csv helpers") {
    EvalReport a, b, c;
    a.method = "kmeans";
    b.method = "somk";
    c.method = "soinak";
    for (auto* r : {&a, &b, &c}) {
        r->dataset = "d";
        r->entropies = {0.1, 0.2, 0.3};
        finalize_report(*r);
    }
    std::vector<EvalReport> rows{a, b, c};
    const auto t = ttest_csv(rows);
    CHECK(std::count(t.begin(), t.end(), '\n') == 1 + 3);
    CHECK(ci_csv(rows).rfind("method,mean,lo,hi\n", 0) == 0);
    CHECK(sanitize_name("simple:d=20") == "simple_d_20");
}
