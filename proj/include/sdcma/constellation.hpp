#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdcma/errors.hpp"

namespace sdcma {

using cdouble = std::complex<double>;
using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

enum class SchemeName { Qpsk, Qam16 };

inline SchemeName parse_scheme_name(std::string_view name) {
    if (name == "qpsk" || name == "QPSK") return SchemeName::Qpsk;
    if (name == "16qam" || name == "QAM16" || name == "16QAM") return SchemeName::Qam16;
    throw ConfigError("unknown constellation '" + std::string(name) + "' (expected qpsk or 16qam)");
}

inline std::string_view to_string(SchemeName name) {
    return name == SchemeName::Qpsk ? "qpsk" : "16qam";
}

/// A 2D constellation with unit average energy. `points[label]` is the
/// point carrying the bit label `label` (MSB first on the wire).
struct ConstellationScheme {
    SchemeName name = SchemeName::Qpsk;
    unsigned bits_per_symbol = 2;
    std::vector<cdouble> points;

    std::size_t size() const noexcept { return points.size(); }

    cdouble point(unsigned label) const { return points.at(label); }

    /// Euclidean-nearest label; equidistant points resolve to the smallest label.
    unsigned nearest_label(cdouble z) const noexcept {
        unsigned best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (unsigned label = 0; label < points.size(); ++label) {
            const double d = std::norm(z - points[label]);
            if (d < best_d) {
                best_d = d;
                best = label;
            }
        }
        return best;
    }

    double average_energy() const noexcept {
        double acc = 0.0;
        for (auto p : points) acc += std::norm(p);
        return points.empty() ? 0.0 : acc / static_cast<double>(points.size());
    }
};

namespace detail {

constexpr unsigned gray_to_binary(unsigned g) noexcept {
    unsigned b = g;
    for (unsigned shift = g >> 1; shift != 0; shift >>= 1) b ^= shift;
    return b;
}

// Gray PAM level for an axis carrying `bits` bits: label 0 sits at the most
// negative level, neighbours differ in one bit.
inline double gray_pam_level(unsigned label, unsigned bits) noexcept {
    const unsigned levels = 1u << bits;
    return 2.0 * static_cast<double>(gray_to_binary(label)) - static_cast<double>(levels - 1);
}

} // namespace detail

/// Gray-coded square QAM: the first half of each label drives I, the second half Q.
inline ConstellationScheme build_scheme(SchemeName name) {
    ConstellationScheme scheme;
    scheme.name = name;
    switch (name) {
    case SchemeName::Qpsk: scheme.bits_per_symbol = 2; break;
    case SchemeName::Qam16: scheme.bits_per_symbol = 4; break;
    default: throw ConfigError("unknown constellation");
    }
    const unsigned axis_bits = scheme.bits_per_symbol / 2;
    const unsigned axis_mask = (1u << axis_bits) - 1;
    const unsigned count = 1u << scheme.bits_per_symbol;

    scheme.points.resize(count);
    for (unsigned label = 0; label < count; ++label) {
        scheme.points[label] = {detail::gray_pam_level(label >> axis_bits, axis_bits),
                                detail::gray_pam_level(label & axis_mask, axis_bits)};
    }
    const double scale = 1.0 / std::sqrt(scheme.average_energy());
    for (auto& p : scheme.points) p *= scale;
    return scheme;
}

inline ConstellationScheme build_scheme(std::string_view name) {
    return build_scheme(parse_scheme_name(name));
}

inline std::vector<cdouble> map_bits(std::span<const Bit> bits, const ConstellationScheme& scheme) {
    const std::size_t k = scheme.bits_per_symbol;
    if (bits.size() % k != 0) {
        throw ShapeError("bit count " + std::to_string(bits.size()) +
                         " is not a multiple of bits_per_symbol " + std::to_string(k));
    }
    std::vector<cdouble> symbols;
    symbols.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        unsigned label = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const Bit b = bits[i + j];
            if (b > 1) throw ShapeError("bit values must be 0 or 1");
            label = (label << 1) | b;
        }
        symbols.push_back(scheme.points[label]);
    }
    return symbols;
}

/// Appends the bits of `label`, MSB first.
inline void append_label_bits(unsigned label, unsigned bits_per_symbol, BitVector& out) {
    for (unsigned j = bits_per_symbol; j-- > 0;) out.push_back(static_cast<Bit>((label >> j) & 1u));
}

inline BitVector demap_hard(std::span<const cdouble> symbols, const ConstellationScheme& scheme) {
    BitVector bits;
    bits.reserve(symbols.size() * scheme.bits_per_symbol);
    for (auto z : symbols) append_label_bits(scheme.nearest_label(z), scheme.bits_per_symbol, bits);
    return bits;
}

} // namespace sdcma
