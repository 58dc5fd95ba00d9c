#include "twostage/pipeline.hpp"

#include <stdexcept>
#include <string>

#include "twostage/centers.hpp"
#include "twostage/kernels.hpp"
#include "twostage/kmeans.hpp"

namespace twostage {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::kmeans: return "kmeans";
        case Method::som: return "som";
        case Method::asca: return "asca";
        case Method::soinn: return "soinn";
        case Method::somk: return "somk";
        case Method::somak: return "somak";
        case Method::ascak: return "ascak";
        case Method::soinak: return "soinak";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (auto m : kAllMethods)
        if (to_string(m) == name) return m;
    std::string valid;
    for (auto m : kAllMethods) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(m);
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (valid: " + valid + ")");
}

bool is_two_stage(Method m) noexcept {
    return m == Method::somk || m == Method::somak || m == Method::ascak || m == Method::soinak;
}

void PipelineConfig::validate() const {
    if (kmeans_restarts == 0) throw std::invalid_argument("kmeans.restarts must be >= 1");
    if (kmeans_max_iter == 0) throw std::invalid_argument("kmeans.max_iter must be >= 1");
    for (const auto& s : default_schedules(som)) s.validate();
    soinn.validate();
    ak.validate();
    asca.validate();
}

namespace {

PrototypeSet raw_stage(const Dataset& ds) {
    PrototypeSet ps;
    ps.prototypes = ds.samples;
    ps.majority_labels = ds.labels;
    ps.source = PrototypeSource::raw;
    return ps;
}

PrototypeSet som_stage(const Dataset& ds, const SomConfig& cfg, RngSeed seed) {
    auto grid = som_init(cfg.rows, cfg.cols, ds.dim(), derive(seed, {0}));
    auto schedules = default_schedules(cfg);
    grid = som_train(std::move(grid), ds.samples, schedules, derive(seed, {1}));
    return som_prototypes(grid, ds);
}

std::size_t resolve_nc(std::optional<std::size_t> requested, std::size_t fallback,
                       std::size_t m_protos) {
    if (requested) {
        if (*requested == 0) throw std::invalid_argument("nc must be >= 1");
        if (*requested > m_protos) {
            throw std::invalid_argument("nc (" + std::to_string(*requested) +
                                        ") exceeds the number of prototypes (" +
                                        std::to_string(m_protos) + ")");
        }
        return *requested;
    }
    if (fallback == 0) throw std::invalid_argument("nc is required for an unlabeled dataset");
    return std::min(fallback, m_protos);
}

Matrix sampled_prototypes(const Matrix& protos, std::size_t nc, RngSeed seed) {
    Rng rng(seed);
    return protos.select_rows(sample_distinct(protos.rows(), nc, rng));
}

void finish_with_ak(PipelineModel& model, const Matrix& init, const AkParams& p, RngSeed seed) {
    auto state = ak_fit(model.stage1.prototypes, model.nc, init, p, seed);
    model.final_centroids = std::move(state.best_centroids);
    model.proto_to_cluster = std::move(state.best_assignment);
}

}  // namespace

PipelineModel two_stage_fit(const Dataset& ds, Method method, std::optional<std::size_t> nc,
                            const PipelineConfig& config, RngSeed seed) {
    config.validate();
    if (ds.size() == 0) throw std::invalid_argument("empty dataset");
    PipelineModel model;
    model.method = method;
    const std::size_t classes = ds.n_classes();
    const RngSeed s1 = derive(seed, {1});
    const RngSeed s2 = derive(seed, {2});
    KMeansOptions kopt;
    kopt.max_iter = config.kmeans_max_iter;
    kopt.seeding = config.kmeans_seeding;

    switch (method) {
        case Method::kmeans: {
            model.stage1 = raw_stage(ds);
            model.nc = resolve_nc(nc, classes, ds.size());
            auto km = kmeans_best_of(ds.samples, model.nc, config.kmeans_restarts, seed, kopt);
            model.final_centroids = std::move(km.centroids);
            model.proto_to_cluster = std::move(km.assignment);
            break;
        }
        case Method::som:
        case Method::asca: {
            if (method == Method::som) {
                model.stage1 = som_stage(ds, config.som, s1);
            } else {
                model.stage1 = asca_fit(ds, config.asca, s1).second;
            }
            model.nc = model.stage1.size();
            model.final_centroids = model.stage1.prototypes;
            model.proto_to_cluster.resize(model.nc);
            for (std::size_t j = 0; j < model.nc; ++j) model.proto_to_cluster[j] = j;
            break;
        }
        case Method::soinn: {
            auto g = soinn_train(ds.samples, config.soinn, s1);
            model.stage1 = soinn_prototypes(g, ds);
            model.nc = g.group_count;
            model.final_centroids = group_centers(g);
            model.proto_to_cluster.reserve(g.node_count());
            for (const auto& n : g.nodes) model.proto_to_cluster.push_back(n.group_label.value());
            break;
        }
        case Method::somk: {
            model.stage1 = som_stage(ds, config.som, s1);
            model.nc = resolve_nc(nc, classes, model.stage1.size());
            auto km = kmeans_best_of(model.stage1.prototypes, model.nc, config.kmeans_restarts, s2,
                                     kopt);
            model.final_centroids = std::move(km.centroids);
            model.proto_to_cluster = std::move(km.assignment);
            break;
        }
        case Method::somak:
        case Method::ascak: {
            model.stage1 = method == Method::somak ? som_stage(ds, config.som, s1)
                                                   : asca_fit(ds, config.asca, s1).second;
            model.nc = resolve_nc(nc, classes, model.stage1.size());
            auto init = sampled_prototypes(model.stage1.prototypes, model.nc, derive(seed, {3}));
            finish_with_ak(model, init, config.ak, s2);
            break;
        }
        case Method::soinak: {
            auto g = soinn_train(ds.samples, config.soinn, s1);
            model.stage1 = soinn_prototypes(g, ds);
            const std::size_t q = g.group_count;
            if (q == 0) throw std::runtime_error("SOINN produced no groups");
            model.nc = resolve_nc(nc, q, model.stage1.size());
            Matrix init = model.nc == q ? group_centers(g)
                                        : sampled_prototypes(model.stage1.prototypes, model.nc,
                                                             derive(seed, {3}));
            finish_with_ak(model, init, config.ak, s2);
            break;
        }
    }
    return model;
}

namespace {

bool maps_directly(Method m) noexcept {
    return m == Method::kmeans || m == Method::som || m == Method::asca;
}

}  // namespace

std::size_t predict(const PipelineModel& model, std::span<const double> x) {
    const Matrix& ref = maps_directly(model.method) ? model.final_centroids : model.stage1.prototypes;
    if (x.size() != ref.cols()) throw std::invalid_argument("predict: dimension mismatch");
    const std::size_t j = kernels::nearest_row(ref, x);
    return maps_directly(model.method) ? j : model.proto_to_cluster[j];
}

std::vector<std::size_t> predict_all(const PipelineModel& model, const Matrix& points) {
    std::vector<std::size_t> out(points.rows());
    if (points.rows() == 0) return out;
    const bool direct = maps_directly(model.method);
    const Matrix& ref = direct ? model.final_centroids : model.stage1.prototypes;
    if (points.cols() != ref.cols()) throw std::invalid_argument("predict: dimension mismatch");
    kernels::omp::assign_nearest(points, ref, out);
    if (!direct)
        for (auto& c : out) c = model.proto_to_cluster[c];
    return out;
}

ComplexityEstimate complexity_estimate(std::size_t n, std::size_t m_protos, std::size_t c_max) {
    if (!(n >= m_protos && m_protos >= c_max && c_max >= 2)) {
        throw std::invalid_argument("complexity_estimate: need n >= M >= C_max >= 2");
    }
    const double N = static_cast<double>(n);
    const double M = static_cast<double>(m_protos);
    const double C = static_cast<double>(c_max);
    // sum_{k=2}^{C} k = C(C+1)/2 - 1
    const double ks = C * (C + 1.0) / 2.0 - 1.0;
    return {N * ks, N * M + M * ks};
}

}  // namespace twostage
