#include "twostage/asca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twostage/kernels.hpp"

namespace twostage {

void AscaParams::validate() const {
    if (!(theta > 0.0)) throw std::invalid_argument("asca: theta must be > 0");
    if (max_rounds == 0) throw std::invalid_argument("asca: max_rounds must be >= 1");
}

std::string_view to_string(AscaStep s) noexcept {
    switch (s) {
        case AscaStep::divide: return "divide";
        case AscaStep::agglomerate_objects: return "agglomerate_objects";
        case AscaStep::agglomerate: return "agglomerate";
        case AscaStep::remove: return "remove";
    }
    return "?";
}

namespace {

std::vector<std::size_t> member_counts(const AscaClustering& c) {
    std::vector<std::size_t> counts(c.n_clusters(), 0);
    for (auto a : c.assignment)
        if (a != kRemoved) ++counts[a];
    return counts;
}

std::vector<std::vector<std::size_t>> members_of(const AscaClustering& c) {
    std::size_t k = c.n_clusters();
    for (auto a : c.assignment)
        if (a != kRemoved) k = std::max(k, a + 1);
    std::vector<std::vector<std::size_t>> m(k);
    for (std::size_t i = 0; i < c.assignment.size(); ++i)
        if (c.assignment[i] != kRemoved) m[c.assignment[i]].push_back(i);
    return m;
}

}  // namespace

AscaClustering asca_single_cluster(const Matrix& points) {
    AscaClustering c;
    c.assignment.assign(points.rows(), 0);
    c.centers = Matrix(1, points.cols());
    asca_refresh(c, points);
    return c;
}

double asca_twcv(const AscaClustering& c, const Matrix& points) {
    std::vector<double> per_cluster(c.n_clusters(), 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto a = c.assignment[i];
        if (a == kRemoved) continue;
        per_cluster[a] += squared_distance(points.row(i), c.centers.row(a));
    }
    double total = 0.0;
    for (double v : per_cluster) total += v;
    return total;
}

void asca_refresh(AscaClustering& c, const Matrix& points) {
    auto members = members_of(c);
    std::vector<std::size_t> remap(members.size(), kRemoved);
    Matrix centers(0, points.cols());
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (members[k].empty()) continue;
        remap[k] = centers.rows();
        auto mean = mean_of_rows(points, members[k]);
        centers.append_row(mean);
    }
    for (auto& a : c.assignment)
        if (a != kRemoved) a = remap[a];
    c.centers = std::move(centers);
}

AscaClustering asca_divide(AscaClustering c, const Matrix& points, RngSeed /*seed*/) {
    if (c.n_clusters() == 0) throw std::invalid_argument("asca_divide: no clusters");
    auto members = members_of(c);
    std::size_t worst = 0;
    double worst_sse = -1.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        double s = 0.0;
        for (auto i : members[k]) s += squared_distance(points.row(i), c.centers.row(k));
        if (s > worst_sse) {
            worst_sse = s;
            worst = k;
        }
    }
    const auto& m = members[worst];
    if (m.size() < 2 || !(worst_sse > 0.0)) return c;

    std::size_t sa = m[0], sb = m[1];
    double far = -1.0;
    for (std::size_t u = 0; u < m.size(); ++u) {
        for (std::size_t v = u + 1; v < m.size(); ++v) {
            const double d = squared_distance(points.row(m[u]), points.row(m[v]));
            if (d > far) {
                far = d;
                sa = m[u];
                sb = m[v];
            }
        }
    }
    const std::size_t fresh = c.n_clusters();
    for (auto i : m) {
        const double da = squared_distance(points.row(i), points.row(sa));
        const double db = squared_distance(points.row(i), points.row(sb));
        if (db < da) c.assignment[i] = fresh;
    }
    c.centers.append_row(points.row(sb));
    asca_refresh(c, points);
    return c;
}

AscaClustering asca_agglomerate_objects(AscaClustering c, const Matrix& points, RngSeed seed,
                                        std::optional<double> fixed_epsilon) {
    if (c.n_clusters() == 0) throw std::invalid_argument("asca_agglomerate_objects: no clusters");
    if (c.n_clusters() == 1) return c;
    const AscaClustering before = c;
    const double twcv_before = asca_twcv(c, points);

    Rng rng(seed);
    auto counts = member_counts(c);
    Matrix& centers = c.centers;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto a = c.assignment[i];
        if (a == kRemoved || counts[a] < 2) continue;
        auto x = points.row(i);
        const auto b = kernels::nearest_row(centers, x);
        if (b == a) continue;
        const double na = static_cast<double>(counts[a]);
        const double nb = static_cast<double>(counts[b]);
        // Exact TWCV change of moving x from a to b with both means updated.
        const double leave = na / (na - 1.0) * squared_distance(x, centers.row(a));
        const double join = nb / (nb + 1.0) * squared_distance(x, centers.row(b));
        if (!(join < leave)) continue;
        const double gain = (leave - join) / leave;
        const double eps = fixed_epsilon ? *fixed_epsilon : rng.uniform();
        if (!(gain > eps)) continue;

        auto ca = centers.row(a);
        auto cb = centers.row(b);
        for (std::size_t j = 0; j < x.size(); ++j) {
            ca[j] = (na * ca[j] - x[j]) / (na - 1.0);
            cb[j] = (nb * cb[j] + x[j]) / (nb + 1.0);
        }
        --counts[a];
        ++counts[b];
        c.assignment[i] = b;
    }
    asca_refresh(c, points);
    // Running means carry rounding; never hand back a worse clustering.
    if (asca_twcv(c, points) > twcv_before) return before;
    return c;
}

AscaClustering asca_agglomerate(AscaClustering c, const Matrix& points) {
    const std::size_t k = c.n_clusters();
    if (k < 2) return c;
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double d = distance(c.centers.row(i), c.centers.row(j));
            sum += d;
            ++pairs;
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    const double mean = sum / static_cast<double>(pairs);
    if (!(best < mean)) return c;
    for (auto& a : c.assignment)
        if (a == bj) a = bi;
    asca_refresh(c, points);
    return c;
}

AscaClustering asca_remove(AscaClustering c, const Matrix& points, const AscaParams& p) {
    p.validate();
    if (c.n_clusters() == 0) throw std::invalid_argument("asca_remove: no clusters");
    const double scale = p.theta / 1000.0 * 3.0;
    auto members = members_of(c);
    bool changed = false;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& m = members[k];
        if (m.size() < 2) continue;
        std::vector<double> d(m.size());
        double mean = 0.0;
        for (std::size_t u = 0; u < m.size(); ++u) {
            d[u] = distance(points.row(m[u]), c.centers.row(k));
            mean += d[u];
        }
        mean /= static_cast<double>(m.size());
        double var = 0.0;
        for (double v : d) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(m.size()));
        const double cut = mean + scale * sd;
        for (std::size_t u = 0; u < m.size(); ++u) {
            if (d[u] > cut) {
                c.assignment[m[u]] = kRemoved;
                changed = true;
            }
        }
    }
    if (changed) asca_refresh(c, points);
    return c;
}

void asca_reattach(AscaClustering& c, const Matrix& points) {
    bool any = false;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        if (c.assignment[i] != kRemoved) continue;
        c.assignment[i] = kernels::nearest_row(c.centers, points.row(i));
        any = true;
    }
    if (any) asca_refresh(c, points);
}

std::pair<AscaClustering, PrototypeSet> asca_fit(const Dataset& ds, const AscaParams& p,
                                                 RngSeed seed) {
    p.validate();
    const Matrix& x = ds.samples;
    if (x.rows() < 2) throw std::invalid_argument("asca: need at least two objects");

    AscaClustering c = asca_single_cluster(x);
    c.twcv_history.push_back(asca_twcv(c, x));
    std::optional<double> fixed;
    if (p.epsilon_mode == EpsilonMode::per_run) fixed = Rng(derive(seed, {0})).uniform();

    for (std::size_t round = 1; round <= p.max_rounds; ++round) {
        c = asca_divide(std::move(c), x, derive(seed, {round, 1}));
        c.trace.push_back(AscaStep::divide);
        c = asca_agglomerate_objects(std::move(c), x, derive(seed, {round, 2}), fixed);
        c.trace.push_back(AscaStep::agglomerate_objects);
        c = asca_agglomerate(std::move(c), x);
        c.trace.push_back(AscaStep::agglomerate);
        c = asca_agglomerate_objects(std::move(c), x, derive(seed, {round, 4}), fixed);
        c.trace.push_back(AscaStep::agglomerate_objects);
        c = asca_remove(std::move(c), x, p);
        c.trace.push_back(AscaStep::remove);

        const double now = asca_twcv(c, x);
        const double last = c.twcv_history.back();
        c.twcv_history.push_back(now);
        if (std::abs(now - last) < 1e-9) break;
    }
    asca_reattach(c, x);

    PrototypeSet ps;
    ps.prototypes = c.centers;
    ps.source = PrototypeSource::asca;
    if (ds.labels) ps.majority_labels = majority_labels(c.assignment, *ds.labels, c.n_clusters());
    return {std::move(c), std::move(ps)};
}

}  // namespace twostage
