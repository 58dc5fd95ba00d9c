#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twostage/matrix.hpp"

namespace twostage {

/// Samples (N x A) plus optional dense class labels in 0..L-1.
struct Dataset {
    Matrix samples;
    std::optional<std::vector<std::size_t>> labels;
    std::vector<std::string> attribute_names;
    std::string name;

    std::size_t size() const noexcept { return samples.rows(); }
    std::size_t dim() const noexcept { return samples.cols(); }
    bool has_labels() const noexcept { return labels.has_value(); }
    /// Number of distinct classes (max label + 1); 0 when unlabeled.
    std::size_t n_classes() const noexcept;

    Dataset subset(std::span<const std::size_t> indices) const;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

/// Parse failure with the offending position (1-based line, 0-based column).
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct CsvOptions {
    bool has_header = false;
    std::optional<std::size_t> label_column;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});

/// Writes `a0,...,a{A-1}[,label]` header then one row per sample. Values use
/// shortest round-trip formatting so output is byte-stable.
std::string to_csv(const Dataset& ds);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

std::string format_double(double v);

struct NormalizationParams {
    std::vector<double> per_attribute_min;
    std::vector<double> per_attribute_max;
};

/// Column-wise min/max of the samples.
NormalizationParams fit_normalization(const Matrix& samples);

/// x' = (2x - max - min) / (max - min) per attribute; a constant attribute maps to 0.
Matrix apply_normalization(const Matrix& samples, const NormalizationParams& params);

/// Fits on `ds` and transforms it; output cells lie in [-1, 1].
std::pair<Dataset, NormalizationParams> normalize(const Dataset& ds);

}  // namespace twostage
