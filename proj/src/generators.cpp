#include "twostage/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twostage {

namespace {

constexpr double kLinePitch = 3.0;
constexpr double kLineJitter = 0.02;

struct Builder {
    std::vector<double> values;
    std::vector<std::size_t> labels;

    void add(double x, double y, std::size_t label) {
        values.push_back(x);
        values.push_back(y);
        labels.push_back(label);
    }

    Dataset finish(std::string name) {
        Dataset ds;
        const std::size_t n = labels.size();
        ds.samples = Matrix(n, 2, std::move(values));
        ds.labels = std::move(labels);
        ds.attribute_names = {"a0", "a1"};
        ds.name = std::move(name);
        return ds;
    }
};

void require_positive(std::size_t n, const char* what) {
    if (n == 0) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

Dataset gen_lines(std::size_t n_total, std::size_t n_segments, RngSeed seed) {
    require_positive(n_segments, "n_segments");
    if (n_total < n_segments) throw std::invalid_argument("n_total must be >= n_segments");
    Rng rng(seed);
    Builder b;
    for (std::size_t i = 0; i < n_total; ++i) {
        const std::size_t seg = i % n_segments;
        const double offset = static_cast<double>(seg);
        const double x = kLinePitch * offset + rng.uniform();
        const double y = offset + rng.normal(0.0, kLineJitter);
        b.add(x, y, seg);
    }
    return b.finish("lines");
}

Dataset gen_banana(std::size_t n_per_class, double s, RngSeed seed) {
    require_positive(n_per_class, "n_per_class");
    if (!(s > 0.0)) throw std::invalid_argument("banana noise s must be > 0");
    Rng rng(seed);
    Builder b;
    const double r = kBananaRadius;
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double t = rng.uniform(0.0, std::numbers::pi);
        const double nx = rng.normal(0.0, s);
        const double ny = rng.normal(0.0, s);
        b.add(r * std::cos(t) + nx, r * std::sin(t) + ny, 0);
    }
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double t = rng.uniform(0.0, std::numbers::pi);
        const double nx = rng.normal(0.0, s);
        const double ny = rng.normal(0.0, s);
        b.add(r - r * std::cos(t) + nx, 0.5 * r - r * std::sin(t) + ny, 1);
    }
    return b.finish("banana");
}

Dataset gen_highleyman(std::size_t n_per_class, RngSeed seed) {
    require_positive(n_per_class, "n_per_class");
    Rng rng(seed);
    Builder b;
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double x = rng.normal(1.0, 1.0);
        const double y = rng.normal(0.0, 0.5);
        b.add(x, y, 0);
    }
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double x = rng.normal(0.01, 1.0);
        const double y = rng.normal(0.0, 2.0);
        b.add(x, y, 1);
    }
    return b.finish("highleyman");
}

Dataset gen_spherical(std::size_t n_per_class, double u, RngSeed seed) {
    require_positive(n_per_class, "n_per_class");
    Rng rng(seed);
    Builder b;
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double x = rng.normal(u, 1.0);
        const double y = rng.normal(0.0, 1.0);
        b.add(x, y, 0);
    }
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const double x = rng.normal(0.0, 2.0);
        const double y = rng.normal(0.0, 1.0);
        b.add(x, y, 1);
    }
    return b.finish("spherical");
}

Dataset gen_simple(std::size_t n_per_class, double d, RngSeed seed) {
    require_positive(n_per_class, "n_per_class");
    if (d < 0.0) throw std::invalid_argument("d must be >= 0");
    Rng rng(seed);
    Builder b;
    for (std::size_t c = 0; c < 2; ++c) {
        const double mx = c == 0 ? 0.0 : d;
        for (std::size_t i = 0; i < n_per_class; ++i) {
            const double x = rng.normal(mx, 1.0);
            const double y = rng.normal(0.0, 1.0);
            b.add(x, y, c);
        }
    }
    return b.finish("simple");
}

}  // namespace twostage
