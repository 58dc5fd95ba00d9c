#include "twostage/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace twostage {

std::size_t Dataset::n_classes() const noexcept {
    if (!labels || labels->empty()) return 0;
    return *std::max_element(labels->begin(), labels->end()) + 1;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.samples = samples.select_rows(indices);
    if (labels) {
        std::vector<std::size_t> l;
        l.reserve(indices.size());
        for (auto i : indices) l.push_back((*labels)[i]);
        out.labels = std::move(l);
    }
    out.attribute_names = attribute_names;
    out.name = name;
    return out;
}

void Dataset::validate() const {
    if (samples.rows() == 0 || samples.cols() == 0) {
        throw std::invalid_argument("dataset must have N >= 1 and A >= 1");
    }
    if (!all_finite(samples)) throw std::invalid_argument("dataset contains non-finite values");
    if (labels && labels->size() != samples.rows()) {
        throw std::invalid_argument("label count does not match sample count");
    }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
    Dataset ds;
    std::vector<double> values;
    std::vector<std::size_t> labels;
    std::unordered_map<std::string, std::size_t> label_ids;
    std::size_t width = 0;
    std::size_t rows = 0;
    bool header_pending = options.has_header;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto cells = split_commas(line);
        if (width == 0) {
            width = cells.size();
            if (options.label_column && *options.label_column >= width) {
                throw CsvError("label column out of range", line_no, *options.label_column);
            }
        } else if (cells.size() != width) {
            throw CsvError("ragged row: expected " + std::to_string(width) + " cells, got " +
                               std::to_string(cells.size()),
                           line_no, std::min(cells.size(), width));
        }
        if (header_pending) {
            header_pending = false;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (options.label_column && c == *options.label_column) continue;
                ds.attribute_names.emplace_back(trim(cells[c]));
            }
            continue;
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            auto cell = trim(cells[c]);
            if (options.label_column && c == *options.label_column) {
                std::string key(cell);
                auto [it, inserted] = label_ids.try_emplace(key, label_ids.size());
                labels.push_back(it->second);
                continue;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw CsvError("non-numeric cell '" + std::string(cell) + "'", line_no, c);
            }
            values.push_back(v);
        }
        ++rows;
        if (end == text.size()) break;
    }
    if (rows == 0) throw CsvError("no data rows", line_no, 0);
    const std::size_t cols = width - (options.label_column ? 1 : 0);
    if (cols == 0) throw CsvError("no numeric columns", 1, 0);
    ds.samples = Matrix(rows, cols, std::move(values));
    if (options.label_column) ds.labels = std::move(labels);
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open " + path.string(), 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw CsvError("read failure on " + path.string(), 0, 0);
    Dataset ds = parse_csv(buf.str(), options);
    ds.name = path.stem().string();
    return ds;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string to_csv(const Dataset& ds) {
    std::string out;
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        if (j) out += ',';
        out += 'a' + std::to_string(j);
    }
    if (ds.labels) out += ",label";
    out += '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto r = ds.samples.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out += ',';
            out += format_double(r[j]);
        }
        if (ds.labels) out += ',' + std::to_string((*ds.labels)[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_csv(ds);
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

NormalizationParams fit_normalization(const Matrix& samples) {
    NormalizationParams p;
    p.per_attribute_min.assign(samples.cols(), std::numeric_limits<double>::infinity());
    p.per_attribute_max.assign(samples.cols(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        auto r = samples.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            p.per_attribute_min[j] = std::min(p.per_attribute_min[j], r[j]);
            p.per_attribute_max[j] = std::max(p.per_attribute_max[j], r[j]);
        }
    }
    return p;
}

Matrix apply_normalization(const Matrix& samples, const NormalizationParams& params) {
    if (params.per_attribute_min.size() != samples.cols()) {
        throw std::invalid_argument("normalization params do not match attribute count");
    }
    Matrix out(samples.rows(), samples.cols());
    for (std::size_t j = 0; j < samples.cols(); ++j) {
        const double lo = params.per_attribute_min[j];
        const double hi = params.per_attribute_max[j];
        const double range = hi - lo;
        for (std::size_t i = 0; i < samples.rows(); ++i) {
            // (2x - max - min) regrouped so that min -> -1 and max -> +1 exactly.
            const double x = samples(i, j);
            out(i, j) = range > 0.0 ? ((x - lo) - (hi - x)) / range : 0.0;
        }
    }
    return out;
}

std::pair<Dataset, NormalizationParams> normalize(const Dataset& ds) {
    auto params = fit_normalization(ds.samples);
    Dataset out = ds;
    out.samples = apply_normalization(ds.samples, params);
    return {std::move(out), std::move(params)};
}

}  // namespace twostage
