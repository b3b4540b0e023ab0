#pragma once

// Hard-decision successive interference cancellation for both access schemes.
// Users are detected strongest first: decide, re-modulate, subtract, repeat.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdcma/constellation.hpp"
#include "sdcma/errors.hpp"
#include "sdcma/link.hpp"
#include "sdcma/signal_space.hpp"
#include "sdcma/waveform.hpp"

namespace sdcma {

/// SIC over signal-space chunks, in place on `residual`. Each stage looks only
/// at its user's dimension pair and cancels only there. `gain` is the known
/// receive amplitude scale applied to the whole composite.
inline std::vector<BitVector> sic_chunks(DimensionGrid& residual, const S2DMatrix& s2d, const PowerAllocation& alloc,
                                         const ConstellationScheme& constellation, double gain = 1.0) {
    if (s2d.users() != alloc.users()) throw ConfigError("S2D rows and power weights disagree on user count");
    if (residual.dim_count() != s2d.dim_count()) throw ShapeError("grid dimension count differs from S2D");
    const std::size_t users = s2d.users();
    std::vector<BitVector> bits(users);
    std::vector<DimensionPair> pairs(users);
    std::vector<double> amplitude(users);
    for (std::size_t u = 0; u < users; ++u) {
        pairs[u] = s2d.pair(u);
        amplitude[u] = gain * alloc.amplitude(u);
        bits[u].reserve(residual.chunk_count() * constellation.bits_per_symbol);
    }
    for (std::size_t t = 0; t < residual.chunk_count(); ++t) {
        auto chunk = residual.chunk(t);
        for (std::size_t u = 0; u < users; ++u) {
            const auto [re_dim, im_dim] = pairs[u];
            const cdouble observed{chunk[re_dim - 1], chunk[im_dim - 1]};
            const unsigned label = constellation.nearest_label(observed / amplitude[u]);
            append_label_bits(label, constellation.bits_per_symbol, bits[u]);
            const cdouble decided = amplitude[u] * constellation.points[label];
            chunk[re_dim - 1] -= decided.real();
            chunk[im_dim - 1] -= decided.imag();
        }
    }
    return bits;
}

/// SIC over carriers where every user occupies the whole complex value.
inline std::vector<BitVector> sic_carriers(std::span<cdouble> residual, const PowerAllocation& alloc,
                                           const ConstellationScheme& constellation, double gain = 1.0) {
    const std::size_t users = alloc.users();
    std::vector<BitVector> bits(users);
    std::vector<double> amplitude(users);
    for (std::size_t u = 0; u < users; ++u) {
        amplitude[u] = gain * alloc.amplitude(u);
        bits[u].reserve(residual.size() * constellation.bits_per_symbol);
    }
    for (auto& r : residual) {
        for (std::size_t u = 0; u < users; ++u) {
            const unsigned label = constellation.nearest_label(r / amplitude[u]);
            append_label_bits(label, constellation.bits_per_symbol, bits[u]);
            r -= amplitude[u] * constellation.points[label];
        }
    }
    return bits;
}

inline std::vector<BitVector> sic_pdsdcma(const TimeFrame& received, const LinkConfig& cfg, double gain = 1.0) {
    if (cfg.scheme != AccessScheme::PdSdcma) throw ConfigError("sic_pdsdcma needs a PD-SDCMA link");
    cfg.validate();
    const auto grid = ofdm_demodulate(received, cfg.ofdm);
    const std::size_t chunks = grid.symbol_count() * cfg.symbols_per_ofdm_symbol();
    auto residual = extract_dim_grid(grid, cfg.s2d->dim_count(), cfg.ofdm, chunks);
    return sic_chunks(residual, *cfg.s2d, cfg.alloc, cfg.constellation, gain);
}

inline std::vector<BitVector> sic_pdnoma(const TimeFrame& received, const LinkConfig& cfg, double gain = 1.0) {
    if (cfg.scheme != AccessScheme::PdNoma) throw ConfigError("sic_pdnoma needs a PD-NOMA link");
    cfg.validate();
    auto residual = read_carriers(ofdm_demodulate(received, cfg.ofdm), cfg.ofdm);
    return sic_carriers(residual, cfg.alloc, cfg.constellation, gain);
}

inline std::vector<BitVector> detect(const TimeFrame& received, const LinkConfig& cfg, double gain = 1.0) {
    return cfg.scheme == AccessScheme::PdSdcma ? sic_pdsdcma(received, cfg, gain) : sic_pdnoma(received, cfg, gain);
}

struct ErrorCount {
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    bool operator==(const ErrorCount&) const = default;
};

inline ErrorCount count_errors(std::span<const Bit> decided, std::span<const Bit> truth) {
    if (decided.size() != truth.size()) throw ShapeError("decided and reference bit streams differ in length");
    ErrorCount count{0, truth.size()};
    for (std::size_t i = 0; i < truth.size(); ++i) count.errors += (decided[i] != truth[i]) ? 1 : 0;
    return count;
}

} // namespace sdcma
