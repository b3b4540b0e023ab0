#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdcma/constellation.hpp"
#include "sdcma/errors.hpp"
#include "sdcma/link.hpp"
#include "sdcma/signal_space.hpp"
#include "sdcma/waveform.hpp"

namespace sdcma {

/// Scales power ratios to sum to one and sorts them strongest first.
inline PowerAllocation normalize_powers(std::span<const double> ratios) {
    if (ratios.empty()) throw ConfigError("power ratio list is empty");
    double total = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("power ratios must be positive and finite");
        total += r;
    }
    PowerAllocation alloc;
    alloc.weights.reserve(ratios.size());
    for (double r : ratios) alloc.weights.push_back(r / total);
    std::sort(alloc.weights.begin(), alloc.weights.end(), std::greater<>{});
    if (std::adjacent_find(alloc.weights.begin(), alloc.weights.end()) != alloc.weights.end()) {
        throw ConfigError("tied power ratios leave the SIC order undefined");
    }
    return alloc;
}

/// Z = sum_i sqrt(P_i) Y_i, sample by sample.
inline TimeFrame superpose(std::span<const TimeFrame> frames, const PowerAllocation& alloc) {
    if (frames.empty() || frames.size() != alloc.users()) {
        throw ShapeError("need exactly one frame per power weight");
    }
    TimeFrame out{frames.front().params, std::vector<cdouble>(frames.front().samples.size())};
    for (std::size_t u = 0; u < frames.size(); ++u) {
        const auto& f = frames[u];
        if (f.samples.size() != out.samples.size() || !(f.params == out.params)) {
            throw ShapeError("user frames differ in length or OFDM parameters");
        }
        const double a = alloc.amplitude(u);
        for (std::size_t i = 0; i < f.samples.size(); ++i) out.samples[i] += a * f.samples[i];
    }
    return out;
}

/// One user's unscaled frame: map, place in the signal space (PD-SDCMA) or
/// straight onto carriers (PD-NOMA), then OFDM-modulate.
inline TimeFrame user_frame(std::span<const Bit> bits, std::size_t user, const LinkConfig& cfg) {
    if (bits.size() != cfg.bits_per_user()) {
        throw ShapeError("user " + std::to_string(user + 1) + " has " + std::to_string(bits.size()) +
                         " bits, expected " + std::to_string(cfg.bits_per_user()));
    }
    const auto symbols = map_bits(bits, cfg.constellation);
    if (cfg.scheme == AccessScheme::PdSdcma) {
        const auto dims = reconstruct_user(symbols, cfg.s2d->pair(user), cfg.s2d->dim_count());
        return ofdm_modulate(assemble_symbols(dims, cfg.ofdm), cfg.ofdm);
    }
    return ofdm_modulate(load_carriers(symbols, cfg.ofdm), cfg.ofdm);
}

/// Full transmit chain for all users; `user_bits[i]` belongs to the i-th strongest user.
inline TimeFrame transmit(std::span<const BitVector> user_bits, const LinkConfig& cfg) {
    cfg.validate();
    if (user_bits.size() != cfg.users()) throw ShapeError("one bit stream per user required");
    std::vector<TimeFrame> frames;
    frames.reserve(user_bits.size());
    for (std::size_t u = 0; u < user_bits.size(); ++u) frames.push_back(user_frame(user_bits[u], u, cfg));
    return superpose(frames, cfg.alloc);
}

} // namespace sdcma
