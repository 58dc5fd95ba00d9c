#pragma once
// Method x dataset matrix runs and their on-disk report bundle.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twostage/config.hpp"
#include "twostage/eval.hpp"

namespace twostage {

struct CellResult {
    std::string dataset;
    Method method = Method::kmeans;
    std::optional<EvalReport> report;
    std::string error;  // set when the cell failed
};

struct Bundle {
    /// File name -> contents. Everything here is a pure function of the config.
    std::map<std::string, std::string> files;
    /// Wall-clock timings, kept out of `files` so bundles stay comparable.
    std::string timing_csv;
    std::vector<CellResult> cells;

    bool all_ok() const;
};

/// Seed of one (dataset, method) cell; independent of the other cells listed.
RngSeed cell_seed(RngSeed master, std::size_t dataset_index, Method m);

/// Runs every cell in config order. A failing cell is recorded and the rest
/// proceed. Dataset resolution errors propagate as ConfigError.
Bundle run_matrix(const ExperimentConfig& config);

/// Writes `files` plus timing.csv into `dir` (created if needed).
void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

/// File-name-safe form of a dataset spec.
std::string sanitize_name(std::string_view name);

std::string ttest_csv(std::span<const EvalReport> reports);
std::string ci_csv(std::span<const EvalReport> reports);

}  // namespace twostage
