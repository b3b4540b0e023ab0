#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdcma/constellation.hpp"
#include "sdcma/errors.hpp"
#include "sdcma/signal_space.hpp"
#include "sdcma/waveform.hpp"

namespace sdcma {

enum class AccessScheme { PdSdcma, PdNoma };

inline std::string_view to_string(AccessScheme scheme) {
    return scheme == AccessScheme::PdSdcma ? "pd-sdcma" : "pd-noma";
}

inline AccessScheme parse_access_scheme(std::string_view name) {
    if (name == "pd-sdcma" || name == "sdcma") return AccessScheme::PdSdcma;
    if (name == "pd-noma" || name == "noma") return AccessScheme::PdNoma;
    throw ConfigError("unknown access scheme '" + std::string(name) + "'");
}

/// Normalized per-user powers, strongest first. The order is the SIC order.
struct PowerAllocation {
    std::vector<double> weights;

    std::size_t users() const noexcept { return weights.size(); }
    double amplitude(std::size_t user) const { return std::sqrt(weights.at(user)); }
};

/// Everything one transmit/receive pass needs.
struct LinkConfig {
    AccessScheme scheme = AccessScheme::PdSdcma;
    ConstellationScheme constellation = build_scheme(SchemeName::Qpsk);
    std::optional<S2DMatrix> s2d; // present iff scheme == PdSdcma
    PowerAllocation alloc;
    OfdmParams ofdm;
    std::size_t n_symbols = 1000; // OFDM symbols per trial

    std::size_t users() const noexcept { return alloc.users(); }

    void validate() const {
        ofdm.validate();
        if (alloc.users() == 0) throw ConfigError("no users configured");
        if (n_symbols == 0) throw ConfigError("n_symbols must be at least 1");
        if (scheme == AccessScheme::PdSdcma) {
            if (!s2d) throw ConfigError("PD-SDCMA needs an S2D matrix");
            if (s2d->columns() != 2) throw ConfigError("2D constellations need a two-column S2D matrix");
            if (s2d->users() != alloc.users()) throw ConfigError("S2D rows and power weights disagree on user count");
            chunks_per_symbol(s2d->dim_count(), ofdm);
        } else if (s2d) {
            throw ConfigError("PD-NOMA does not take an S2D matrix");
        }
    }

    /// Constellation symbols each user sends per OFDM symbol.
    std::size_t symbols_per_ofdm_symbol() const {
        return scheme == AccessScheme::PdSdcma ? chunks_per_symbol(s2d->dim_count(), ofdm) : ofdm.n_carriers;
    }

    std::size_t symbols_per_user() const { return n_symbols * symbols_per_ofdm_symbol(); }
    std::size_t bits_per_user() const { return symbols_per_user() * constellation.bits_per_symbol; }
};

} // namespace sdcma
