#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twostage/dataset.hpp"
#include "twostage/pipeline.hpp"
#include "twostage/rng.hpp"

namespace twostage {

struct EntropyReport {
    std::vector<double> per_cluster_entropy;  // e_i
    std::vector<std::size_t> per_cluster_size;  // m_i
    Matrix class_given_cluster;                 // p_ij, K x L
    double total_entropy = 0.0;                 // e
};

/// Contingency-table entropy with 0 log 0 = 0, weighted by cluster size.
/// Cluster count is max id + 1 (at least `min_clusters`).
EntropyReport cluster_entropy(std::span<const std::size_t> assignment,
                              std::span<const std::size_t> labels, std::size_t n_classes,
                              std::size_t min_clusters = 0);

std::vector<std::size_t> assign_test_fold(const Matrix& test_points, const PipelineModel& model);

struct EvalReport {
    std::string method;
    std::string dataset;
    std::vector<double> entropies;
    std::vector<double> times_seconds;
    double min = 0.0, max = 0.0, mean = 0.0, std = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
};

struct Summary {
    double min, max, mean, std;
};
/// std is the sample standard deviation (n - 1).
Summary summarize(std::span<const double> samples);

/// mean +/- t_{(1+level)/2, n-1} * s / sqrt(n).
std::pair<double, double> confidence_interval(std::span<const double> samples,
                                              double level = 0.95);

struct TTestResult {
    double t_statistic = 0.0;
    double degrees_of_freedom = 1.0;  // Welch-Satterthwaite
    double p_value = 1.0;
    bool significant = false;
};

/// Two-sided Welch t-test.
TTestResult t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

struct ExperimentOptions {
    std::size_t runs = 30;
    std::size_t k_folds = 10;
    std::optional<std::size_t> nc;
    PipelineConfig config;
};

/// Cross-validated protocol: per run a fresh fold plan; per fold, fit
/// normalization and the model on the other folds, assign the held-out fold by
/// nearest prototype and score its entropy. A run's entropy is the fold mean.
/// Runs are independent and execute in parallel; results are ordered by run.
EvalReport run_experiment(Method method, const Dataset& ds, const ExperimentOptions& opt,
                          RngSeed seed);

/// Fills min/max/mean/std/ci from `entropies`.
void finalize_report(EvalReport& r);

/// Table rows: dataset,method,min,max,mean,std,ci_low,ci_high.
std::string table_to_csv(std::span<const EvalReport> rows);
std::vector<EvalReport> table_from_csv(std::string_view text);

}  // namespace twostage
