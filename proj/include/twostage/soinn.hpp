#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "twostage/dataset.hpp"
#include "twostage/matrix.hpp"
#include "twostage/prototypes.hpp"
#include "twostage/rng.hpp"

namespace twostage {

struct SoinnNode {
    std::vector<double> weight;
    double local_error = 0.0;   // accumulated distance to won samples
    double density = 0.0;       // win count, also the t of the adaptive rates
    double error_radius = 0.0;  // refreshed to error/density when the node takes part in an insertion
    std::optional<std::size_t> group_label;
};

struct SoinnEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t age = 0;
};

/// Splits applied during intra-class insertion.
struct SoinnDecay {
    double alpha1 = 1.0 / 6.0;  // new node error
    double alpha2 = 1.0 / 4.0;  // new node density
    double alpha3 = 1.0 / 4.0;  // new node inherited radius
    double beta = 2.0 / 3.0;    // error kept by q and f
    double gamma = 3.0 / 4.0;   // density kept by q and f
};

struct SoinnParams {
    std::size_t lambda = 100;
    std::size_t age_dead = 100;
    /// Passes over the training set per layer when `lt` is not given.
    std::size_t lt_passes = 2;
    /// Explicit layer-1 presentation budget.
    std::optional<std::size_t> lt;
    /// Layer-2 constant threshold; derived from the layer-1 graph when absent.
    std::optional<double> second_layer_threshold;
    /// Outlier fence (in robust standard deviations) separating intra-group
    /// edges from bridges when deriving the layer-2 threshold.
    double bridge_fence = 6.0;
    SoinnDecay decay;

    void validate() const;
};

/// A rate 1/d held as its denominator: applying it divides by d, so
/// rate * d evaluates to d / d == 1 exactly for every d.
struct ReciprocalRate {
    double denominator = 1.0;
    double value() const noexcept { return 1.0 / denominator; }
};
inline double operator*(ReciprocalRate r, double v) noexcept { return v / r.denominator; }
inline double operator*(double v, ReciprocalRate r) noexcept { return v / r.denominator; }

/// Adaptive learning rate of the winner: 1/t.
inline ReciprocalRate winner_rate(double t) noexcept { return {t}; }
/// Adaptive learning rate of the winner's neighbours: 1/(100 t).
inline ReciprocalRate neighbor_rate(double t) noexcept { return {100.0 * t}; }

class SoinnGraph {
public:
    std::vector<SoinnNode> nodes;
    int layer = 1;
    std::size_t group_count = 0;
    /// When set, every node uses this similarity threshold (second layer).
    std::optional<double> constant_threshold;

    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t edge_count() const noexcept;

    std::size_t add_node(std::span<const double> w);
    /// Creates the edge or resets its age to 0.
    void connect(std::size_t a, std::size_t b);
    void disconnect(std::size_t a, std::size_t b);
    bool connected(std::size_t a, std::size_t b) const;
    std::optional<std::size_t> edge_age(std::size_t a, std::size_t b) const;
    void set_edge_age(std::size_t a, std::size_t b, std::size_t age);

    /// Neighbour ids in ascending order.
    std::vector<std::size_t> neighbors(std::size_t i) const;
    std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
    std::vector<SoinnEdge> edges() const;

    void increment_edge_ages(std::size_t i);
    /// Drops edges of node i older than age_dead; returns how many went.
    std::size_t remove_old_edges(std::size_t i, std::size_t age_dead);

    /// Removes the flagged nodes and renumbers the rest in order.
    void remove_nodes(const std::vector<bool>& doomed);

private:
    std::vector<std::map<std::size_t, std::size_t>> adjacency_;  // neighbour -> age
};

/// Max distance to direct neighbours, or min distance to any other node when
/// the node has none. Throws if the graph has fewer than two nodes.
double similarity_threshold(const SoinnGraph& g, std::size_t node);

/// Record of one intra-class insertion attempt, for inspection.
struct SoinnInsertion {
    std::size_t q = 0;
    std::size_t f = 0;
    std::size_t r = 0;  // id the new node had (removed again when not kept)
    SoinnNode q_before, f_before;
    SoinnNode q_after, f_after, r_node;
    bool kept = false;
};

enum class SoinnStepKind { seeded, between_class, within_class };

struct SoinnStepReport {
    SoinnStepKind kind = SoinnStepKind::seeded;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::optional<SoinnInsertion> insertion;
    std::size_t pruned = 0;
};

/// One presentation of `x` at 1-based step `step`: winner search, between-class
/// insertion or winner/neighbour adaptation with edge ageing, and on every
/// lambda-th step an intra-class insertion attempt followed by noise pruning.
SoinnStepReport process_sample(SoinnGraph& g, std::span<const double> x, std::size_t step,
                               const SoinnParams& p);

/// Intra-class insertion between the max-error node and its max-error
/// neighbour. Cancelled (and rolled back) unless the new node's error radius is
/// below the pre-insertion radius of both q and f.
std::optional<SoinnInsertion> intra_class_insertion(SoinnGraph& g, const SoinnParams& p);

/// Deletes isolated nodes and single-edge nodes whose density is below the
/// mean density. Skipped if fewer than two nodes would remain.
std::size_t prune_noise(SoinnGraph& g);

/// Connected components labelled 0..Q-1 in order of their lowest node id.
void label_groups(SoinnGraph& g);

/// Layer-2 threshold from a layer-1 graph. MDI is the mean edge length.
/// Edges longer than median + fence * (scaled MAD) of the edge lengths count as
/// bridges; nodes linked by shorter edges, or closer than that scale, form one
/// group. The threshold is max(scale, 1.5 * MDI), capped at the midpoint
/// between the scale and the smallest gap between groups, so it exceeds MDI
/// and stays below every inter-group gap.
double second_layer_threshold(const SoinnGraph& layer1, double bridge_fence = 6.0);

/// Layer 1 on the samples, layer 2 on the surviving layer-1 weights, then labelling.
SoinnGraph soinn_train(const Matrix& samples, const SoinnParams& p, RngSeed seed);

/// Runs one layer from two seed nodes for `presentations` random draws.
SoinnGraph soinn_layer(const Matrix& inputs, std::size_t presentations, const SoinnParams& p,
                       std::optional<double> constant_threshold, RngSeed seed);

/// Mean weight of each labelled group, row q for group q.
Matrix group_centers(const SoinnGraph& g);

/// Node weights as prototypes; suggested_k = Q. Majority labels come from
/// nearest-node mapping of the dataset when it is labelled.
PrototypeSet soinn_prototypes(const SoinnGraph& g, const Dataset& ds);

}  // namespace twostage
