#pragma once

// Finite enumeration of superposed (joint) constellations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "sdcma/constellation.hpp"
#include "sdcma/link.hpp"
#include "sdcma/signal_space.hpp"

namespace sdcma {

using Point = std::vector<double>;

/// Every noiseless composite D-vector of a PD-SDCMA chunk: all label
/// combinations, each user scaled by sqrt(P_i) on its dimension pair.
inline std::vector<Point> joint_constellation(const ConstellationScheme& c, const S2DMatrix& s2d,
                                              const PowerAllocation& alloc) {
    const std::size_t users = s2d.users();
    const std::size_t m = c.size();
    std::size_t combos = 1;
    for (std::size_t u = 0; u < users; ++u) combos *= m;

    std::vector<Point> points;
    points.reserve(combos);
    for (std::size_t idx = 0; idx < combos; ++idx) {
        Point p(s2d.dim_count(), 0.0);
        std::size_t rest = idx;
        for (std::size_t u = 0; u < users; ++u) {
            const cdouble s = alloc.amplitude(u) * c.points[rest % m];
            rest /= m;
            const auto pair = s2d.pair(u);
            p[pair[0] - 1] += s.real();
            p[pair[1] - 1] += s.imag();
        }
        points.push_back(std::move(p));
    }
    return points;
}

/// All noiseless composite carrier values of PD-NOMA superposition.
inline std::vector<cdouble> noma_composite(const ConstellationScheme& c, const PowerAllocation& alloc) {
    std::vector<cdouble> points{cdouble{}};
    for (std::size_t u = 0; u < alloc.users(); ++u) {
        std::vector<cdouble> next;
        next.reserve(points.size() * c.size());
        for (auto base : points) {
            for (auto s : c.points) next.push_back(base + alloc.amplitude(u) * s);
        }
        points = std::move(next);
    }
    return points;
}

inline std::vector<Point> to_points(const std::vector<cdouble>& zs) {
    std::vector<Point> out;
    out.reserve(zs.size());
    for (auto z : zs) out.push_back({z.real(), z.imag()});
    return out;
}

/// Keeps only the coordinates named by `pair` (1-based).
inline std::vector<Point> project_points(const std::vector<Point>& points, const DimensionPair& pair) {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.at(pair[0] - 1), p.at(pair[1] - 1)});
    return out;
}

/// Distinct points, coordinates compared after rounding to `tol`.
inline std::size_t count_distinct(const std::vector<Point>& points, double tol = 1e-9) {
    std::vector<std::vector<long long>> keys;
    keys.reserve(points.size());
    for (const auto& p : points) {
        std::vector<long long> k;
        for (double v : p) k.push_back(std::llround(v / tol));
        keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

inline double min_distance(const std::vector<Point>& points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < points[i].size(); ++k) {
                const double diff = points[i][k] - points[j][k];
                d2 += diff * diff;
            }
            best = std::min(best, d2);
        }
    }
    return std::sqrt(best);
}

} // namespace sdcma
