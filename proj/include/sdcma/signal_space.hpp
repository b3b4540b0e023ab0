#pragma once

// Signal-space bookkeeping: which real dimensions each user occupies (the
// S2D matrix), how dimensions land on carrier I/Q components, and moving
// complex symbols in and out of D-dimensional coordinate vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sdcma/errors.hpp"

namespace sdcma {

using cdouble = std::complex<double>;

/// 1-based dimension indices carrying (real, imaginary) of one user's symbol.
using DimensionPair = std::array<std::size_t, 2>;

/// Dimension-selection matrix: row i lists the 1-based signal-space
/// dimensions used by user i (users in descending power order).
class S2DMatrix {
public:
    S2DMatrix() = default;

    /// `dim_count == 0` means "use the largest entry".
    explicit S2DMatrix(std::vector<std::vector<std::size_t>> rows, std::size_t dim_count = 0)
        : rows_(std::move(rows)) {
        if (rows_.empty()) throw ConfigError("S2D matrix needs at least one row");
        columns_ = rows_.front().size();
        if (columns_ == 0) throw ConfigError("S2D matrix needs at least one column");
        std::size_t max_entry = 0;
        for (const auto& row : rows_) {
            if (row.size() != columns_) throw ConfigError("S2D matrix rows have unequal lengths");
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] == 0) throw ConfigError("S2D dimension indices are 1-based");
                if (std::find(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(j), row[j]) !=
                    row.begin() + static_cast<std::ptrdiff_t>(j)) {
                    throw ConfigError("S2D row repeats a dimension");
                }
                max_entry = std::max(max_entry, row[j]);
            }
        }
        dim_count_ = dim_count == 0 ? max_entry : dim_count;
        if (max_entry > dim_count_) throw ConfigError("S2D entry exceeds the dimension count");
        if (dim_count_ < columns_) throw ConfigError("S2D dimension count smaller than column count");
    }

    std::size_t users() const noexcept { return rows_.size(); }
    std::size_t columns() const noexcept { return columns_; }
    std::size_t dim_count() const noexcept { return dim_count_; }

    std::span<const std::size_t> row(std::size_t user) const { return rows_.at(user); }
    const std::vector<std::vector<std::size_t>>& rows() const noexcept { return rows_; }

    DimensionPair pair(std::size_t user) const {
        if (columns_ != 2) throw ConfigError("only two-column S2D matrices carry 2D constellations");
        const auto& r = rows_.at(user);
        return {r[0], r[1]};
    }

    bool operator==(const S2DMatrix&) const = default;

private:
    std::vector<std::vector<std::size_t>> rows_;
    std::size_t columns_ = 0;
    std::size_t dim_count_ = 0;
};

/// Circulant strategy: row i = [((i-1) mod D)+1, (i mod D)+1].
inline S2DMatrix circulant_s2d(std::size_t users, std::size_t columns, std::size_t dim_count) {
    if (columns != 2) throw ConfigError("circulant S2D is defined for two columns");
    if (users < 1) throw ConfigError("S2D needs at least one user");
    if (dim_count < 2) throw ConfigError("S2D needs at least two dimensions");
    std::vector<std::vector<std::size_t>> rows(users);
    for (std::size_t i = 1; i <= users; ++i) {
        rows[i - 1] = {((i - 1) % dim_count) + 1, (i % dim_count) + 1};
    }
    return S2DMatrix(std::move(rows), dim_count);
}

/// Default dimension count for g users: a lone user needs a single carrier,
/// two users share one dimension out of three, more users wrap around g.
inline std::size_t default_dim_count(std::size_t users) noexcept {
    if (users <= 1) return 2;
    if (users == 2) return 3;
    return users;
}

inline S2DMatrix circulant_s2d(std::size_t users) {
    return circulant_s2d(users, 2, default_dim_count(users));
}

enum class Component { I, Q };

struct CarrierComponent {
    std::size_t carrier = 0; // 1-based
    Component component = Component::I;
    bool operator==(const CarrierComponent&) const = default;
};

inline CarrierComponent dim_to_carrier_component(std::size_t dim) {
    if (dim < 1) throw IndexError("dimension indices start at 1");
    return {(dim + 1) / 2, dim % 2 == 1 ? Component::I : Component::Q};
}

inline std::size_t carrier_component_to_dim(CarrierComponent cc) {
    if (cc.carrier < 1) throw IndexError("carrier indices start at 1");
    return 2 * cc.carrier - (cc.component == Component::I ? 1 : 0);
}

inline std::size_t carriers_per_chunk(std::size_t dim_count) noexcept { return (dim_count + 1) / 2; }

/// chunk_count independent D-dimensional coordinate vectors, stored row-major.
class DimensionGrid {
public:
    DimensionGrid() = default;
    DimensionGrid(std::size_t chunk_count, std::size_t dim_count)
        : chunk_count_(chunk_count), dim_count_(dim_count), values_(chunk_count * dim_count, 0.0) {}

    std::size_t chunk_count() const noexcept { return chunk_count_; }
    std::size_t dim_count() const noexcept { return dim_count_; }

    /// `dim` is 1-based, like the S2D entries.
    double& at(std::size_t chunk, std::size_t dim) { return values_.at(offset(chunk, dim)); }
    double at(std::size_t chunk, std::size_t dim) const { return values_.at(offset(chunk, dim)); }

    std::span<double> chunk(std::size_t t) { return {values_.data() + t * dim_count_, dim_count_}; }
    std::span<const double> chunk(std::size_t t) const {
        return {values_.data() + t * dim_count_, dim_count_};
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool operator==(const DimensionGrid&) const = default;

private:
    std::size_t offset(std::size_t chunk, std::size_t dim) const {
        if (chunk >= chunk_count_ || dim < 1 || dim > dim_count_) throw IndexError("grid index out of range");
        return chunk * dim_count_ + (dim - 1);
    }

    std::size_t chunk_count_ = 0;
    std::size_t dim_count_ = 0;
    std::vector<double> values_;
};

inline void check_pair(const DimensionPair& pair, std::size_t dim_count) {
    for (auto d : pair) {
        if (d < 1 || d > dim_count) {
            throw IndexError("dimension " + std::to_string(d) + " outside 1.." + std::to_string(dim_count));
        }
    }
}

/// Places symbol t's real part on pair[0] and imaginary part on pair[1] of chunk t.
inline DimensionGrid reconstruct_user(std::span<const cdouble> symbols, const DimensionPair& pair,
                                      std::size_t dim_count) {
    check_pair(pair, dim_count);
    DimensionGrid grid(symbols.size(), dim_count);
    for (std::size_t t = 0; t < symbols.size(); ++t) {
        auto c = grid.chunk(t);
        c[pair[0] - 1] = symbols[t].real();
        c[pair[1] - 1] = symbols[t].imag();
    }
    return grid;
}

inline std::vector<DimensionGrid> reconstruct(std::span<const std::vector<cdouble>> user_symbols,
                                              const S2DMatrix& s2d) {
    if (user_symbols.size() != s2d.users()) throw ShapeError("one symbol sequence per S2D row required");
    std::vector<DimensionGrid> grids;
    grids.reserve(user_symbols.size());
    for (std::size_t u = 0; u < user_symbols.size(); ++u) {
        if (user_symbols[u].size() != user_symbols.front().size()) {
            throw ShapeError("all users must carry the same number of symbols");
        }
        grids.push_back(reconstruct_user(user_symbols[u], s2d.pair(u), s2d.dim_count()));
    }
    return grids;
}

inline cdouble project(std::span<const double> chunk, const DimensionPair& pair) {
    check_pair(pair, chunk.size());
    return {chunk[pair[0] - 1], chunk[pair[1] - 1]};
}

/// Integral over [0, period] of cos(2 pi f_i t + phase_i) cos(2 pi f_j t + phase_j),
/// by composite Simpson's rule.
inline double carrier_orthogonality_check(double f_i, double f_j, double phase_i, double phase_j,
                                          double period, std::size_t intervals = 8192) {
    if (!(period > 0.0)) throw ConfigError("symbol period must be positive");
    if (intervals % 2 != 0) ++intervals;
    const double h = period / static_cast<double>(intervals);
    auto f = [&](double t) {
        return std::cos(2.0 * std::numbers::pi * f_i * t + phase_i) *
               std::cos(2.0 * std::numbers::pi * f_j * t + phase_j);
    };
    double acc = f(0.0) + f(period);
    for (std::size_t k = 1; k < intervals; ++k) {
        acc += (k % 2 == 1 ? 4.0 : 2.0) * f(h * static_cast<double>(k));
    }
    return acc * h / 3.0;
}

} // namespace sdcma
