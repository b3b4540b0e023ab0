#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sdcma/errors.hpp"

namespace sdcma {

using cdouble = std::complex<double>;
using Engine = std::mt19937_64;

struct ChannelSpec {
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

inline double measure_power(std::span<const cdouble> samples) {
    if (samples.empty()) throw ShapeError("cannot measure the power of an empty sequence");
    double acc = 0.0;
    for (auto s : samples) acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

/// Total complex noise variance for a signal of `signal_power` at `snr_db`.
inline double noise_variance(double signal_power, double snr_db) {
    if (!std::isfinite(snr_db)) throw ConfigError("SNR must be finite");
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

/// Adds circular complex Gaussian noise referenced to the measured power of
/// `samples` (every sample counts, cyclic prefix included).
inline std::vector<cdouble> awgn(std::span<const cdouble> samples, double snr_db, Engine& engine) {
    const double sigma = std::sqrt(noise_variance(measure_power(samples), snr_db) / 2.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cdouble> out(samples.begin(), samples.end());
    for (auto& s : out) {
        const double re = normal(engine);
        const double im = normal(engine);
        s += cdouble{sigma * re, sigma * im};
    }
    return out;
}

inline std::vector<cdouble> awgn(std::span<const cdouble> samples, const ChannelSpec& spec) {
    Engine engine(spec.seed);
    return awgn(samples, spec.snr_db, engine);
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the stream owned by one (scheme, SNR point, trial) cell.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t scheme_id,
                                                  std::uint64_t snr_index, std::uint64_t trial_index) noexcept {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ scheme_id);
    h = splitmix64(h ^ snr_index);
    return splitmix64(h ^ trial_index);
}

} // namespace sdcma
