#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twostage/matrix.hpp"

namespace twostage {

enum class PrototypeSource { raw, som, asca, soinn };

std::string_view to_string(PrototypeSource s) noexcept;

/// First-stage output: M prototype vectors handed to the second stage.
struct PrototypeSet {
    Matrix prototypes;
    std::optional<std::vector<std::size_t>> majority_labels;
    /// Cluster count proposed by the first stage (SOINN's group count).
    std::optional<std::size_t> suggested_k;
    PrototypeSource source = PrototypeSource::raw;

    std::size_t size() const noexcept { return prototypes.rows(); }
};

/// Majority class per prototype given each sample's prototype index; ties go to
/// the lowest class id. Prototypes with no samples get class 0.
std::vector<std::size_t> majority_labels(std::span<const std::size_t> sample_to_proto,
                                         std::span<const std::size_t> labels,
                                         std::size_t n_protos);

}  // namespace twostage
