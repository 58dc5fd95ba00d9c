#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "twostage/ant_kmeans.hpp"
#include "twostage/asca.hpp"
#include "twostage/dataset.hpp"
#include "twostage/kmeans.hpp"
#include "twostage/prototypes.hpp"
#include "twostage/rng.hpp"
#include "twostage/soinn.hpp"
#include "twostage/som.hpp"

namespace twostage {

enum class Method { kmeans, som, asca, soinn, somk, somak, ascak, soinak };

inline constexpr Method kAllMethods[] = {Method::kmeans, Method::som,   Method::asca,
                                         Method::soinn,  Method::somk,  Method::somak,
                                         Method::ascak,  Method::soinak};

std::string_view to_string(Method m) noexcept;
/// Throws std::invalid_argument listing the valid names.
Method parse_method(std::string_view name);
bool is_two_stage(Method m) noexcept;

struct PipelineConfig {
    /// Best-of-R K-means (plain kmeans and the SOMK second stage).
    std::size_t kmeans_restarts = 1;
    std::size_t kmeans_max_iter = 300;
    KMeansSeeding kmeans_seeding = KMeansSeeding::plusplus;
    SomConfig som;
    SoinnParams soinn;
    AkParams ak;
    AscaParams asca;

    void validate() const;
};

struct PipelineModel {
    Method method = Method::kmeans;
    PrototypeSet stage1;
    Matrix final_centroids;
    std::vector<std::size_t> proto_to_cluster;
    std::size_t nc = 0;
};

/// Fits `method` on `ds`. When `nc` is absent the class count (or SOINN's
/// group count for soinak) is used, capped at the number of prototypes; an
/// explicit nc larger than the prototype count is an error.
PipelineModel two_stage_fit(const Dataset& ds, Method method, std::optional<std::size_t> nc,
                            const PipelineConfig& config, RngSeed seed);

/// Cluster of one vector: nearest prototype then its cluster, or the nearest
/// final centroid for kmeans/som/asca.
std::size_t predict(const PipelineModel& model, std::span<const double> x);
std::vector<std::size_t> predict_all(const PipelineModel& model, const Matrix& points);

struct ComplexityEstimate {
    double direct = 0.0;
    double two_stage = 0.0;
};

/// Proportional costs of clustering N points directly for k = 2..C_max versus
/// through M prototypes (N*M to build them plus M*k per candidate k).
ComplexityEstimate complexity_estimate(std::size_t n, std::size_t m_protos, std::size_t c_max);

}  // namespace twostage
