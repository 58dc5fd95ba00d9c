#include "twostage/prototypes.hpp"

#include <algorithm>
#include <stdexcept>

namespace twostage {

std::string_view to_string(PrototypeSource s) noexcept {
    switch (s) {
        case PrototypeSource::raw: return "raw";
        case PrototypeSource::som: return "som";
        case PrototypeSource::asca: return "asca";
        case PrototypeSource::soinn: return "soinn";
    }
    return "raw";
}

std::vector<std::size_t> majority_labels(std::span<const std::size_t> sample_to_proto,
                                         std::span<const std::size_t> labels,
                                         std::size_t n_protos) {
    if (sample_to_proto.size() != labels.size()) {
        throw std::invalid_argument("majority_labels: length mismatch");
    }
    const std::size_t n_classes =
        labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::size_t> counts(n_protos * n_classes, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++counts.at(sample_to_proto[i] * n_classes + labels[i]);
    }
    std::vector<std::size_t> out(n_protos, 0);
    for (std::size_t p = 0; p < n_protos; ++p) {
        auto first = counts.begin() + static_cast<std::ptrdiff_t>(p * n_classes);
        out[p] = static_cast<std::size_t>(
            std::max_element(first, first + static_cast<std::ptrdiff_t>(n_classes)) - first);
    }
    return out;
}

}  // namespace twostage
