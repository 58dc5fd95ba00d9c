#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "twostage/dataset.hpp"
#include "twostage/matrix.hpp"
#include "twostage/prototypes.hpp"
#include "twostage/rng.hpp"

namespace twostage {

enum class EpsilonMode { per_decision, per_run };

struct AscaParams {
    EpsilonMode epsilon_mode = EpsilonMode::per_decision;
    /// Outlier scale; 1000 corresponds to a three-sigma cut.
    double theta = 1000.0;
    std::size_t max_rounds = 50;

    void validate() const;
};

/// Cluster id carried by objects set aside by asca_remove.
inline constexpr std::size_t kRemoved = std::numeric_limits<std::size_t>::max();

enum class AscaStep { divide, agglomerate_objects, agglomerate, remove };
std::string_view to_string(AscaStep s) noexcept;

struct AscaClustering {
    std::vector<std::size_t> assignment;
    Matrix centers;
    std::vector<double> twcv_history;
    /// Subprocedures in execution order (filled by asca_fit).
    std::vector<AscaStep> trace;

    std::size_t n_clusters() const noexcept { return centers.rows(); }
};

/// Every object in one cluster.
AscaClustering asca_single_cluster(const Matrix& points);

/// TWCV over objects that are not removed.
double asca_twcv(const AscaClustering& c, const Matrix& points);

/// Recomputes centers from the non-removed members, dropping clusters left
/// empty and renumbering the rest in order.
void asca_refresh(AscaClustering& c, const Matrix& points);

/// Splits the cluster with the largest within-cluster variance around its two
/// mutually farthest members. The split is deterministic; `seed` is unused.
AscaClustering asca_divide(AscaClustering c, const Matrix& points, RngSeed seed);

/// One sweep: each object whose nearest center is another cluster moves there
/// when the move strictly lowers TWCV and its relative gain beats epsilon
/// (drawn per decision, or fixed when `fixed_epsilon` is set).
AscaClustering asca_agglomerate_objects(AscaClustering c, const Matrix& points, RngSeed seed,
                                        std::optional<double> fixed_epsilon = std::nullopt);

/// Merges the closest pair of centers if their distance is below the mean
/// pairwise center distance. At most one merge.
AscaClustering asca_agglomerate(AscaClustering c, const Matrix& points);

/// Marks members farther from their center than mean + (theta/1000)*3*std of
/// that cluster's member distances.
AscaClustering asca_remove(AscaClustering c, const Matrix& points, const AscaParams& p);

/// Reattaches removed objects to their nearest center.
void asca_reattach(AscaClustering& c, const Matrix& points);

std::pair<AscaClustering, PrototypeSet> asca_fit(const Dataset& ds, const AscaParams& p,
                                                 RngSeed seed);

}  // namespace twostage
