#include "twostage/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "twostage/folds.hpp"

namespace twostage {

EntropyReport cluster_entropy(std::span<const std::size_t> assignment,
                              std::span<const std::size_t> labels, std::size_t n_classes,
                              std::size_t min_clusters) {
    if (assignment.empty()) throw std::invalid_argument("cluster_entropy: empty input");
    if (assignment.size() != labels.size()) {
        throw std::invalid_argument("cluster_entropy: assignment and labels differ in length");
    }
    std::size_t k = min_clusters;
    for (auto a : assignment) k = std::max(k, a + 1);
    for (auto l : labels)
        if (l >= n_classes) throw std::invalid_argument("cluster_entropy: label out of range");

    EntropyReport r;
    r.per_cluster_size.assign(k, 0);
    r.per_cluster_entropy.assign(k, 0.0);
    r.class_given_cluster = Matrix(k, n_classes);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        ++r.per_cluster_size[assignment[i]];
        r.class_given_cluster(assignment[i], labels[i]) += 1.0;
    }
    const double m = static_cast<double>(assignment.size());
    for (std::size_t c = 0; c < k; ++c) {
        const double mi = static_cast<double>(r.per_cluster_size[c]);
        if (mi == 0.0) continue;
        double e = 0.0;
        for (std::size_t j = 0; j < n_classes; ++j) {
            double& p = r.class_given_cluster(c, j);
            p /= mi;
            if (p > 0.0) e -= p * std::log2(p);
        }
        r.per_cluster_entropy[c] = e;
        r.total_entropy += mi / m * e;
    }
    return r;
}

std::vector<std::size_t> assign_test_fold(const Matrix& test_points, const PipelineModel& model) {
    return predict_all(model, test_points);
}

Summary summarize(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("summarize: no samples");
    Summary s{x[0], x[0], 0.0, 0.0};
    for (double v : x) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        s.mean += v;
    }
    s.mean /= static_cast<double>(x.size());
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(x.size() - 1));
    }
    return s;
}

std::pair<double, double> confidence_interval(std::span<const double> samples, double level) {
    if (samples.size() < 2) throw std::invalid_argument("confidence_interval: need >= 2 samples");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
    const auto s = summarize(samples);
    const double n = static_cast<double>(samples.size());
    boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
    const double half = t * s.std / std::sqrt(n);
    return {s.mean - half, s.mean + half};
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t_test: need >= 2 samples each");
    const auto sa = summarize(a);
    const auto sb = summarize(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sa.std * sa.std / na;
    const double vb = sb.std * sb.std / nb;
    TTestResult r;
    const double se2 = va + vb;
    if (se2 == 0.0) {
        // Both samples constant: only a difference in means is meaningful.
        r.degrees_of_freedom = na + nb - 2.0;
        if (sa.mean == sb.mean) return r;
        r.t_statistic = sa.mean > sb.mean ? INFINITY : -INFINITY;
        r.p_value = 0.0;
        r.significant = true;
        return r;
    }
    r.t_statistic = (sa.mean - sb.mean) / std::sqrt(se2);
    const double denom = va * va / (na - 1.0) + vb * vb / (nb - 1.0);
    r.degrees_of_freedom = std::max(1.0, se2 * se2 / denom);
    boost::math::students_t dist(r.degrees_of_freedom);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t_statistic)));
    r.significant = r.p_value < alpha;
    return r;
}

void finalize_report(EvalReport& r) {
    const auto s = summarize(r.entropies);
    r.min = s.min;
    r.max = s.max;
    r.mean = s.mean;
    r.std = s.std;
    if (r.entropies.size() >= 2) {
        std::tie(r.ci_low, r.ci_high) = confidence_interval(r.entropies);
    } else {
        r.ci_low = r.ci_high = s.mean;
    }
}

namespace {

double run_once(Method method, const Dataset& ds, const ExperimentOptions& opt, RngSeed run_seed) {
    const auto plan = make_folds(ds.size(), opt.k_folds, derive(run_seed, {0}));
    const std::size_t classes = ds.n_classes();
    double total = 0.0;
    for (std::size_t f = 0; f < opt.k_folds; ++f) {
        const auto train_idx = plan.train_indices(f);
        const auto test_idx = plan.test_indices(f);
        Dataset train = ds.subset(train_idx);
        Dataset test = ds.subset(test_idx);
        const auto norm = fit_normalization(train.samples);
        train.samples = apply_normalization(train.samples, norm);
        test.samples = apply_normalization(test.samples, norm);
        auto model = two_stage_fit(train, method, opt.nc, opt.config, derive(run_seed, {f + 1}));
        auto assigned = assign_test_fold(test.samples, model);
        total += cluster_entropy(assigned, *test.labels, classes).total_entropy;
    }
    return total / static_cast<double>(opt.k_folds);
}

}  // namespace

EvalReport run_experiment(Method method, const Dataset& ds, const ExperimentOptions& opt,
                          RngSeed seed) {
    if (!ds.has_labels()) throw std::invalid_argument("run_experiment: dataset has no labels");
    if (opt.runs < 2) throw std::invalid_argument("run_experiment: runs must be >= 2");
    if (opt.k_folds < 2 || opt.k_folds > ds.size()) {
        throw std::invalid_argument("run_experiment: k_folds must lie in [2, N]");
    }
    opt.config.validate();

    EvalReport r;
    r.method = std::string(to_string(method));
    r.dataset = ds.name;
    r.entropies.assign(opt.runs, 0.0);
    r.times_seconds.assign(opt.runs, 0.0);
    std::vector<std::exception_ptr> errors(opt.runs);
    const auto runs = static_cast<std::ptrdiff_t>(opt.runs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < runs; ++i) {
        const auto run = static_cast<std::size_t>(i);
        try {
            const auto t0 = std::chrono::steady_clock::now();
            r.entropies[run] = run_once(method, ds, opt, derive(seed, {run}));
            const auto t1 = std::chrono::steady_clock::now();
            r.times_seconds[run] = std::chrono::duration<double>(t1 - t0).count();
        } catch (...) {
            errors[run] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    finalize_report(r);
    return r;
}

std::string table_to_csv(std::span<const EvalReport> rows) {
    std::string out = "dataset,method,min,max,mean,std,ci_low,ci_high\n";
    for (const auto& r : rows) {
        out += r.dataset + ',' + r.method;
        for (double v : {r.min, r.max, r.mean, r.std, r.ci_low, r.ci_high}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<EvalReport> table_from_csv(std::string_view text) {
    std::vector<EvalReport> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "dataset,method,min,max,mean,std,ci_low,ci_high") {
        throw std::invalid_argument("table csv: unexpected header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) {
            throw std::invalid_argument("table csv: line " + std::to_string(lineno) +
                                        " has " + std::to_string(cells.size()) + " cells");
        }
        EvalReport r;
        r.dataset = cells[0];
        r.method = cells[1];
        double* dst[] = {&r.min, &r.max, &r.mean, &r.std, &r.ci_low, &r.ci_high};
        for (std::size_t c = 0; c < 6; ++c) {
            std::size_t used = 0;
            *dst[c] = std::stod(cells[c + 2], &used);
            if (used != cells[c + 2].size()) {
                throw std::invalid_argument("table csv: bad number on line " + std::to_string(lineno));
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace twostage
