#pragma once
// Experiment configuration: flat INI sections of key = value.
//
//   [run]     seed, runs, folds, nc, methods (comma list), datasets (comma list)
//   [kmeans]  restarts, max_iter, seeding = plusplus | random
//   [som]     rows, cols, alpha, alpha_decay, radius, radius_end, epochs_rough, epochs_fine
//   [soinn]   lambda, age_dead, lt, bridge_fence
//   [ak]      alpha, beta, rho, q, iterations, ants, perturb, tau0
//   [asca]    epsilon = per_decision | per_run, theta, max_rounds
//
// A dataset is either a generator spec `name[:key=value...]` (e.g.
// `lines:n=1000:segments=10`, `simple:d=20:n=100`) or a path ending in .csv
// (label = last column, header detected from a non-numeric first cell).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twostage/dataset.hpp"
#include "twostage/pipeline.hpp"
#include "twostage/rng.hpp"

namespace twostage {

/// Bad configuration or usage; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::vector<Method> methods{Method::kmeans};
    std::vector<std::string> datasets{"lines"};
    std::uint64_t seed = 1;
    std::size_t runs = 30;
    std::size_t k_folds = 10;
    std::optional<std::size_t> nc;
    PipelineConfig pipeline;

    /// Throws ConfigError naming the field.
    void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical INI form; parse_config(config_to_ini(c)) reproduces c.
std::string config_to_ini(const ExperimentConfig& c);

/// Applies one `section.key = value` override (the CLI flag path).
void set_config_value(ExperimentConfig& c, std::string_view section, std::string_view key,
                      std::string_view value);

const std::vector<std::string>& generator_names();

/// Runs a named generator. Unknown names or parameters raise ConfigError
/// listing what is accepted.
Dataset generate_dataset(std::string_view name, const std::map<std::string, std::string>& params,
                         RngSeed seed);

/// Generator spec or CSV path, see above. Generated sets without an explicit
/// `seed=` use `seed`.
Dataset resolve_dataset(std::string_view spec, RngSeed seed);

}  // namespace twostage
