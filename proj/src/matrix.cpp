#include "twostage/matrix.hpp"

#include <cmath>

namespace twostage {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(0, rows.front().size());
    for (const auto& r : rows) m.append_row(r);
    return m;
}

void Matrix::append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) {
        throw std::invalid_argument("Matrix::append_row: width mismatch");
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto src = row(indices[i]);
        auto dst = out.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
    return std::sqrt(squared_distance(a, b));
}

std::vector<double> mean_of_rows(const Matrix& points, std::span<const std::size_t> members) {
    if (members.empty()) throw std::invalid_argument("mean_of_rows: empty subset");
    std::vector<double> c(points.cols(), 0.0);
    for (auto i : members) {
        auto r = points.row(i);
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
    }
    const double inv = 1.0 / static_cast<double>(members.size());
    for (auto& v : c) v *= inv;
    return c;
}

bool all_finite(const Matrix& m) noexcept {
    for (double v : m.data()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace twostage
