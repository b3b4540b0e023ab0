#pragma once

// Monte Carlo BER engine: scenario presets, per-SNR-point trials with
// derived RNG streams, SNR sweeps, and BER-target crossing estimates.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sdcma/channel.hpp"
#include "sdcma/constellation.hpp"
#include "sdcma/errors.hpp"
#include "sdcma/link.hpp"
#include "sdcma/multiplex.hpp"
#include "sdcma/receiver.hpp"
#include "sdcma/signal_space.hpp"
#include "sdcma/waveform.hpp"

namespace sdcma {

struct ScenarioPreset {
    std::string name;
    SchemeName constellation;
    std::vector<std::vector<std::size_t>> s2d;
    std::vector<double> power_ratios;
};

inline const std::vector<ScenarioPreset>& scenario_presets() {
    static const std::vector<ScenarioPreset> presets = {
        {"2u-16qam", SchemeName::Qam16, {{1, 2}, {2, 3}}, {16, 1}},
        {"3u-qpsk", SchemeName::Qpsk, {{1, 2}, {2, 3}, {3, 1}}, {16, 4, 1}},
        {"5u-qpsk", SchemeName::Qpsk, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}}, {256, 64, 16, 4, 1}},
    };
    return presets;
}

inline const ScenarioPreset& find_preset(std::string_view name) {
    for (const auto& p : scenario_presets()) {
        if (p.name == name) return p;
    }
    throw ConfigError("unknown scenario '" + std::string(name) + "' (expected 2u-16qam, 3u-qpsk or 5u-qpsk)");
}

inline LinkConfig make_link(AccessScheme scheme, SchemeName constellation, std::vector<std::vector<std::size_t>> s2d_rows,
                            std::span<const double> power_ratios, const OfdmParams& ofdm = {},
                            std::size_t n_symbols = 1000) {
    LinkConfig cfg;
    cfg.scheme = scheme;
    cfg.constellation = build_scheme(constellation);
    cfg.alloc = normalize_powers(power_ratios);
    cfg.ofdm = ofdm;
    cfg.n_symbols = n_symbols;
    if (scheme == AccessScheme::PdSdcma) cfg.s2d = S2DMatrix(std::move(s2d_rows));
    cfg.validate();
    return cfg;
}

inline LinkConfig make_link(const ScenarioPreset& preset, AccessScheme scheme, const OfdmParams& ofdm = {},
                            std::size_t n_symbols = 1000) {
    return make_link(scheme, preset.constellation, preset.s2d, preset.power_ratios, ofdm, n_symbols);
}

struct SnrGrid {
    double start = 0.0;
    double stop = 40.0;
    double step = 1.0;

    /// start, start+step, ... up to stop (inclusive, with a little slack for rounding).
    std::vector<double> values() const {
        if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
            throw ConfigError("SNR grid needs finite bounds and a positive step");
        }
        std::vector<double> out;
        for (std::size_t k = 0;; ++k) {
            const double v = start + static_cast<double>(k) * step;
            if (v > stop + 1e-9 * step) break;
            out.push_back(v);
        }
        if (out.empty()) throw ConfigError("SNR grid is empty (start > stop)");
        return out;
    }
};

struct SimConfig {
    LinkConfig link;
    SnrGrid snr;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    /// A point stops early once every user has this many errors; 0 disables.
    std::uint64_t early_stop_errors = 200;
    /// 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;

    void validate() const {
        link.validate();
        if (trials < 1) throw ConfigError("trials must be at least 1");
        snr.values();
    }
};

struct BerRecord {
    std::string scheme;
    std::size_t user = 1; // 1-based, strongest first
    double snr_db = 0.0;
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    /// Binomial standard error of the BER estimate.
    double standard_error() const {
        return bits == 0 ? 0.0 : std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
    }

    bool operator==(const BerRecord&) const = default;
};

inline void fill_random_bits(BitVector& bits, Engine& engine) {
    std::size_t i = 0;
    while (i < bits.size()) {
        std::uint64_t word = engine();
        for (int b = 0; b < 64 && i < bits.size(); ++b, ++i) {
            bits[i] = static_cast<Bit>(word & 1u);
            word >>= 1;
        }
    }
}

/// Runs up to cfg.trials independent trials at one SNR and aggregates per-user errors.
inline std::vector<BerRecord> run_point(const SimConfig& cfg, double snr_db, std::size_t snr_index = 0) {
    cfg.validate();
    const auto& link = cfg.link;
    const std::size_t users = link.users();
    const auto scheme_id = static_cast<std::uint64_t>(link.scheme);

    std::vector<ErrorCount> totals(users);
    std::vector<BitVector> truth(users, BitVector(link.bits_per_user()));
    std::size_t trials_run = 0;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        Engine engine(derive_stream_seed(cfg.seed, scheme_id, snr_index, trial));
        for (auto& bits : truth) fill_random_bits(bits, engine);

        TimeFrame frame = transmit(truth, link);
        frame.samples = awgn(frame.samples, snr_db, engine);
        const auto decided = detect(frame, link);

        for (std::size_t u = 0; u < users; ++u) {
            const auto c = count_errors(decided[u], truth[u]);
            totals[u].errors += c.errors;
            totals[u].bits += c.bits;
        }
        ++trials_run;

        if (cfg.early_stop_errors > 0 &&
            std::all_of(totals.begin(), totals.end(),
                        [&](const ErrorCount& c) { return c.errors >= cfg.early_stop_errors; })) {
            break;
        }
    }

    std::vector<BerRecord> records;
    records.reserve(users);
    for (std::size_t u = 0; u < users; ++u) {
        BerRecord r;
        r.scheme = std::string(to_string(link.scheme));
        r.user = u + 1;
        r.snr_db = snr_db;
        r.errors = totals[u].errors;
        r.bits = totals[u].bits;
        r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits);
        r.trials = trials_run;
        r.seed = cfg.seed;
        records.push_back(std::move(r));
    }
    return records;
}

/// run_point over the SNR grid, points spread over worker threads. Output is
/// sorted by (user, snr) and independent of the thread count.
inline std::vector<BerRecord> sweep(const SimConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.snr.values();
    std::vector<std::vector<BerRecord>> per_point(grid.size());

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                per_point[i] = run_point(cfg, grid[i], i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<BerRecord> records;
    for (auto& point : per_point) records.insert(records.end(), point.begin(), point.end());
    std::stable_sort(records.begin(), records.end(), [](const BerRecord& a, const BerRecord& b) {
        return a.user != b.user ? a.user < b.user : a.snr_db < b.snr_db;
    });
    return records;
}

struct SnrCrossing {
    /// Interpolated SNR where the target is met; empty if it is never bracketed.
    std::optional<double> snr_db;
    /// For a miss: the BER at the grid end closest to the target.
    double boundary_ber = 0.0;

    bool reached() const noexcept { return snr_db.has_value(); }
};

/// Log-linear interpolation of log10(BER) against SNR between the first pair of
/// grid points that brackets `target_ber`. Zero-error points count as 0.5/bits.
inline SnrCrossing snr_at_ber(std::span<const BerRecord> records, std::size_t user, double target_ber) {
    if (!(target_ber > 0.0 && target_ber < 1.0)) throw ConfigError("target BER must lie in (0, 1)");
    std::vector<const BerRecord*> curve;
    for (const auto& r : records) {
        if (r.user != user) continue;
        if (!curve.empty() && curve.front()->scheme != r.scheme) {
            throw ShapeError("snr_at_ber needs records from a single scheme");
        }
        curve.push_back(&r);
    }
    if (curve.empty()) throw ShapeError("no records for user " + std::to_string(user));
    std::sort(curve.begin(), curve.end(), [](auto* a, auto* b) { return a->snr_db < b->snr_db; });

    auto log_ber = [](const BerRecord& r) {
        const double floor = r.bits == 0 ? 0.0 : 0.5 / static_cast<double>(r.bits);
        return std::log10(std::max(r.ber, floor));
    };

    if (curve.front()->ber <= target_ber) {
        // already below target at the lowest SNR: no bracket
        return {std::nullopt, curve.front()->ber};
    }
    const double log_target = std::log10(target_ber);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const BerRecord& hi = *curve[i - 1];
        const BerRecord& lo = *curve[i];
        if (hi.ber > target_ber && lo.ber <= target_ber) {
            const double y0 = log_ber(hi);
            const double y1 = log_ber(lo);
            if (y1 >= y0) return {lo.snr_db, lo.ber};
            const double frac = (y0 - log_target) / (y0 - y1);
            return {hi.snr_db + frac * (lo.snr_db - hi.snr_db), lo.ber};
        }
    }
    return {std::nullopt, curve.back()->ber};
}

inline std::vector<BerRecord> filter_scheme(std::span<const BerRecord> records, AccessScheme scheme) {
    std::vector<BerRecord> out;
    for (const auto& r : records) {
        if (r.scheme == to_string(scheme)) out.push_back(r);
    }
    return out;
}

} // namespace sdcma
