#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sph/errors.hpp"

namespace sph {

using Vec = std::vector<double>;

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                                " vs " + std::to_string(b));
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    require_same_dim(x.size(), y.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double dist(std::span<const double> x, std::span<const double> y) {
    require_same_dim(x.size(), y.size(), "dist");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec axpy(double a, std::span<const double> x, std::span<const double> y) {
    require_same_dim(x.size(), y.size(), "axpy");
    Vec r(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += a * x[i];
    return r;
}

inline Vec sub(std::span<const double> x, std::span<const double> y) { return axpy(-1.0, y, x); }

/// Element of the one-point compactification of R^n: a finite point or infinity.
class PointOrInfinity {
public:
    static PointOrInfinity infinity(int n) { return PointOrInfinity(n); }

    PointOrInfinity(Vec coords) : n_(static_cast<int>(coords.size())), coords_(std::move(coords)) {
        if (n_ < 1) throw InvalidInput("point must have at least one coordinate");
        for (double c : *coords_)
            if (!std::isfinite(c)) throw InvalidInput("point coordinates must be finite");
    }
    PointOrInfinity(std::initializer_list<double> c) : PointOrInfinity(Vec(c)) {}

    bool is_infinity() const { return !coords_.has_value(); }
    int dim() const { return n_; }
    const Vec& coords() const {
        if (!coords_) throw InvalidInput("infinity has no coordinates");
        return *coords_;
    }

    friend bool operator==(const PointOrInfinity& a, const PointOrInfinity& b) = default;

private:
    explicit PointOrInfinity(int n) : n_(n) {}
    int n_;
    std::optional<Vec> coords_;
};

}  // namespace sph
