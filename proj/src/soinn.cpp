#include "twostage/soinn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twostage/centers.hpp"
#include "twostage/kernels.hpp"

namespace twostage {

void SoinnParams::validate() const {
    if (lambda == 0) throw std::invalid_argument("soinn: lambda must be >= 1");
    if (age_dead == 0) throw std::invalid_argument("soinn: age_dead must be >= 1");
    if (!lt && lt_passes == 0) throw std::invalid_argument("soinn: lt must be >= 1");
    if (lt && *lt == 0) throw std::invalid_argument("soinn: lt must be >= 1");
    if (!(bridge_fence >= 0.0)) throw std::invalid_argument("soinn: bridge fence must be >= 0");
    if (second_layer_threshold && !(*second_layer_threshold >= 0.0)) {
        throw std::invalid_argument("soinn: second-layer threshold must be >= 0");
    }
}

// --- graph -----------------------------------------------------------------

std::size_t SoinnGraph::edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& a : adjacency_) n += a.size();
    return n / 2;
}

std::size_t SoinnGraph::add_node(std::span<const double> w) {
    SoinnNode node;
    node.weight.assign(w.begin(), w.end());
    nodes.push_back(std::move(node));
    adjacency_.emplace_back();
    return nodes.size() - 1;
}

void SoinnGraph::connect(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("soinn: self edge");
    adjacency_.at(a)[b] = 0;
    adjacency_.at(b)[a] = 0;
}

void SoinnGraph::disconnect(std::size_t a, std::size_t b) {
    adjacency_.at(a).erase(b);
    adjacency_.at(b).erase(a);
}

bool SoinnGraph::connected(std::size_t a, std::size_t b) const {
    return adjacency_.at(a).count(b) != 0;
}

std::optional<std::size_t> SoinnGraph::edge_age(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency_.at(a);
    auto it = adj.find(b);
    if (it == adj.end()) return std::nullopt;
    return it->second;
}

void SoinnGraph::set_edge_age(std::size_t a, std::size_t b, std::size_t age) {
    if (!connected(a, b)) throw std::invalid_argument("soinn: no such edge");
    adjacency_[a][b] = age;
    adjacency_[b][a] = age;
}

std::vector<std::size_t> SoinnGraph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    out.reserve(adjacency_.at(i).size());
    for (const auto& [j, age] : adjacency_[i]) out.push_back(j);
    return out;
}

std::vector<SoinnEdge> SoinnGraph::edges() const {
    std::vector<SoinnEdge> out;
    for (std::size_t a = 0; a < adjacency_.size(); ++a) {
        for (const auto& [b, age] : adjacency_[a]) {
            if (a < b) out.push_back({a, b, age});
        }
    }
    return out;
}

void SoinnGraph::increment_edge_ages(std::size_t i) {
    for (auto& [j, age] : adjacency_.at(i)) {
        ++age;
        adjacency_[j][i] = age;
    }
}

std::size_t SoinnGraph::remove_old_edges(std::size_t i, std::size_t age_dead) {
    std::vector<std::size_t> old;
    for (const auto& [j, age] : adjacency_.at(i)) {
        if (age > age_dead) old.push_back(j);
    }
    for (auto j : old) disconnect(i, j);
    return old.size();
}

void SoinnGraph::remove_nodes(const std::vector<bool>& doomed) {
    constexpr auto gone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> remap(nodes.size(), gone);
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!doomed[i]) remap[i] = next++;
    }
    std::vector<SoinnNode> kept_nodes;
    std::vector<std::map<std::size_t, std::size_t>> kept_adj;
    kept_nodes.reserve(next);
    kept_adj.reserve(next);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (remap[i] == gone) continue;
        kept_nodes.push_back(std::move(nodes[i]));
        std::map<std::size_t, std::size_t> adj;
        for (const auto& [j, age] : adjacency_[i]) {
            if (remap[j] != gone) adj.emplace(remap[j], age);
        }
        kept_adj.push_back(std::move(adj));
    }
    nodes = std::move(kept_nodes);
    adjacency_ = std::move(kept_adj);
}

// --- learning ----------------------------------------------------------------

double similarity_threshold(const SoinnGraph& g, std::size_t node) {
    if (g.node_count() < 2) throw std::invalid_argument("similarity_threshold: need >= 2 nodes");
    const auto& w = g.nodes.at(node).weight;
    auto nbrs = g.neighbors(node);
    if (!nbrs.empty()) {
        double t = 0.0;
        for (auto c : nbrs) t = std::max(t, distance(w, g.nodes[c].weight));
        return t;
    }
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < g.node_count(); ++c) {
        if (c != node) t = std::min(t, distance(w, g.nodes[c].weight));
    }
    return t;
}

namespace {

double threshold_of(const SoinnGraph& g, std::size_t node) {
    return g.constant_threshold ? *g.constant_threshold : similarity_threshold(g, node);
}

double radius(const SoinnNode& n) { return n.density > 0.0 ? n.local_error / n.density : 0.0; }

}  // namespace

std::optional<SoinnInsertion> intra_class_insertion(SoinnGraph& g, const SoinnParams& p) {
    if (g.node_count() < 2) return std::nullopt;
    std::size_t q = 0;
    for (std::size_t i = 1; i < g.node_count(); ++i) {
        if (g.nodes[i].local_error > g.nodes[q].local_error) q = i;
    }
    auto nbrs = g.neighbors(q);
    if (nbrs.empty()) return std::nullopt;
    std::size_t f = nbrs.front();
    for (auto c : nbrs) {
        if (g.nodes[c].local_error > g.nodes[f].local_error) f = c;
    }

    SoinnInsertion ins;
    ins.q = q;
    ins.f = f;
    ins.q_before = g.nodes[q];
    ins.f_before = g.nodes[f];

    auto& nq = g.nodes[q];
    auto& nf = g.nodes[f];
    nq.error_radius = radius(nq);
    nf.error_radius = radius(nf);

    SoinnNode r;
    r.weight.resize(nq.weight.size());
    for (std::size_t d = 0; d < r.weight.size(); ++d) {
        r.weight[d] = (nq.weight[d] + nf.weight[d]) / 2.0;
    }
    const auto& k = p.decay;
    r.local_error = k.alpha1 * (nq.local_error + nf.local_error);
    r.density = k.alpha2 * (nq.density + nf.density);
    r.error_radius = k.alpha3 * (nq.error_radius + nf.error_radius);
    nq.local_error = k.beta * nq.local_error;
    nf.local_error = k.beta * nf.local_error;
    nq.density = k.gamma * nq.density;
    nf.density = k.gamma * nf.density;

    const double new_radius = r.density > 0.0 ? r.local_error / r.density
                                              : std::numeric_limits<double>::infinity();
    ins.kept = new_radius < g.nodes[q].error_radius && new_radius < g.nodes[f].error_radius;
    ins.r = g.node_count();
    ins.q_after = g.nodes[q];
    ins.f_after = g.nodes[f];
    ins.r_node = r;

    if (!ins.kept) {
        g.nodes[q] = ins.q_before;
        g.nodes[f] = ins.f_before;
        return ins;
    }
    const std::size_t rid = g.add_node(r.weight);
    g.nodes[rid] = std::move(r);
    g.connect(rid, q);
    g.connect(rid, f);
    g.disconnect(q, f);
    return ins;
}

std::size_t prune_noise(SoinnGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0;
    double mean_density = 0.0;
    for (const auto& node : g.nodes) mean_density += node.density;
    mean_density /= static_cast<double>(n);

    std::vector<bool> doomed(n, false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t deg = g.degree(i);
        if (deg == 0 || (deg == 1 && g.nodes[i].density < mean_density)) {
            doomed[i] = true;
            ++count;
        }
    }
    if (count == 0 || n - count < 2) return 0;
    g.remove_nodes(doomed);
    return count;
}

SoinnStepReport process_sample(SoinnGraph& g, std::span<const double> x, std::size_t step,
                               const SoinnParams& p) {
    SoinnStepReport rep;
    if (!g.nodes.empty() && x.size() != g.nodes.front().weight.size()) {
        throw std::invalid_argument("soinn: dimension mismatch");
    }
    if (g.node_count() < 2) {
        g.add_node(x);
        rep.kind = SoinnStepKind::seeded;
        return rep;
    }

    std::size_t s1 = 0, s2 = 1;
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const double d = squared_distance(x, g.nodes[i].weight);
        if (d < d1) {
            d2 = d1;
            s2 = s1;
            d1 = d;
            s1 = i;
        } else if (d < d2) {
            d2 = d;
            s2 = i;
        }
    }
    d1 = std::sqrt(d1);
    d2 = std::sqrt(d2);
    rep.s1 = s1;
    rep.s2 = s2;

    if (d1 > threshold_of(g, s1) || d2 > threshold_of(g, s2)) {
        g.add_node(x);
        rep.kind = SoinnStepKind::between_class;
    } else {
        rep.kind = SoinnStepKind::within_class;
        g.connect(s1, s2);
        g.increment_edge_ages(s1);
        auto& win = g.nodes[s1];
        win.local_error += d1;
        win.density += 1.0;
        const double t = win.density;
        const auto e1 = winner_rate(t);
        for (std::size_t d = 0; d < x.size(); ++d) win.weight[d] += e1 * (x[d] - win.weight[d]);
        const auto e2 = neighbor_rate(t);
        for (auto c : g.neighbors(s1)) {
            auto& w = g.nodes[c].weight;
            for (std::size_t d = 0; d < x.size(); ++d) w[d] += e2 * (x[d] - w[d]);
        }
        g.remove_old_edges(s1, p.age_dead);
    }

    if (step % p.lambda == 0) {
        rep.insertion = intra_class_insertion(g, p);
        rep.pruned = prune_noise(g);
    }
    return rep;
}

void label_groups(SoinnGraph& g) {
    for (auto& n : g.nodes) n.group_label.reset();
    std::size_t q = 0;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (g.nodes[i].group_label) continue;
        g.nodes[i].group_label = q;
        stack.push_back(i);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (auto v : g.neighbors(u)) {
                if (!g.nodes[v].group_label) {
                    g.nodes[v].group_label = q;
                    stack.push_back(v);
                }
            }
        }
        ++q;
    }
    g.group_count = q;
}

double second_layer_threshold(const SoinnGraph& layer1, double bridge_fence) {
    const SoinnGraph& g = layer1;
    const std::size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("soinn: threshold needs at least two nodes");
    auto w = [&](std::size_t i) { return std::span<const double>(g.nodes[i].weight); };

    auto edges = g.edges();
    std::vector<double> len;
    len.reserve(edges.size());
    for (const auto& e : edges) len.push_back(distance(w(e.a), w(e.b)));

    double mdi = 0.0;
    double scale = 0.0;
    if (!len.empty()) {
        for (double d : len) mdi += d;
        mdi /= static_cast<double>(len.size());
        // Robust fence on edge lengths: longer edges are treated as bridges
        // between groups rather than intra-group links.
        std::vector<double> sorted = len;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        std::vector<double> dev;
        dev.reserve(len.size());
        for (double d : len) dev.push_back(std::abs(d - median));
        std::sort(dev.begin(), dev.end());
        const double mad = 1.4826 * dev[dev.size() / 2];
        scale = std::max(mdi, median + bridge_fence * mad);
    } else {
        // No edges: fall back to the mean nearest-neighbour distance.
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) best = std::min(best, distance(w(i), w(j)));
            mdi += best;
        }
        mdi /= static_cast<double>(n);
        scale = mdi;
    }

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (len[i] <= scale) parent[find(edges[i].a)] = find(edges[i].b);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(w(i), w(j)) <= scale) parent[find(i)] = find(j);

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (find(i) != find(j)) gap = std::min(gap, distance(w(i), w(j)));
    // Stay near the intra-group scale: a threshold spanning a whole group
    // leaves it one or two layer-2 nodes, which noise pruning can wipe out.
    const double target = std::max(scale, 1.5 * mdi);
    if (std::isfinite(gap)) return std::min(target, 0.5 * (scale + gap));
    return target;
}

SoinnGraph soinn_layer(const Matrix& inputs, std::size_t presentations, const SoinnParams& p,
                       std::optional<double> constant_threshold, RngSeed seed) {
    if (inputs.rows() < 2) throw std::invalid_argument("soinn: need at least two inputs");
    Rng rng(seed);
    SoinnGraph g;
    g.constant_threshold = constant_threshold;
    g.layer = constant_threshold ? 2 : 1;
    for (auto i : sample_distinct(inputs.rows(), 2, rng)) g.add_node(inputs.row(i));
    for (std::size_t step = 1; step <= presentations; ++step) {
        process_sample(g, inputs.row(rng.index(inputs.rows())), step, p);
    }
    if (presentations % p.lambda != 0) prune_noise(g);
    return g;
}

SoinnGraph soinn_train(const Matrix& samples, const SoinnParams& p, RngSeed seed) {
    p.validate();
    if (samples.rows() < 2) throw std::invalid_argument("soinn: need N >= 2");
    const std::size_t lt1 = p.lt.value_or(p.lt_passes * samples.rows());
    SoinnGraph first = soinn_layer(samples, lt1, p, std::nullopt, derive(seed, {1}));

    Matrix layer2_inputs(0, samples.cols());
    for (const auto& n : first.nodes) layer2_inputs.append_row(n.weight);
    const double tc = p.second_layer_threshold.value_or(second_layer_threshold(first, p.bridge_fence));
    const std::size_t lt2 = p.lt_passes * std::max(layer2_inputs.rows(), p.lambda);
    SoinnGraph second = soinn_layer(layer2_inputs, lt2, p, tc, derive(seed, {2}));
    label_groups(second);
    return second;
}

Matrix group_centers(const SoinnGraph& g) {
    Matrix centers(g.group_count, g.nodes.empty() ? 0 : g.nodes.front().weight.size());
    std::vector<std::size_t> counts(g.group_count, 0);
    for (const auto& n : g.nodes) {
        const std::size_t q = n.group_label.value();
        auto row = centers.row(q);
        for (std::size_t d = 0; d < row.size(); ++d) row[d] += n.weight[d];
        ++counts[q];
    }
    for (std::size_t q = 0; q < g.group_count; ++q) {
        for (auto& v : centers.row(q)) v /= static_cast<double>(counts[q]);
    }
    return centers;
}

PrototypeSet soinn_prototypes(const SoinnGraph& g, const Dataset& ds) {
    PrototypeSet out;
    out.source = PrototypeSource::soinn;
    out.prototypes = Matrix(0, ds.dim());
    for (const auto& n : g.nodes) out.prototypes.append_row(n.weight);
    out.suggested_k = g.group_count;
    if (ds.labels && out.size() > 0) {
        std::vector<std::size_t> nearest(ds.size());
        kernels::serial::assign_nearest(ds.samples, out.prototypes, nearest);
        out.majority_labels = majority_labels(nearest, *ds.labels, out.size());
    }
    return out;
}

}  // namespace twostage
