#pragma once

// OFDM-style waveform: dimension grids are packed onto carrier I/Q, inverse
// DFT with 1/N scaling, cyclic prefix, and the reverse path.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdcma/errors.hpp"
#include "sdcma/signal_space.hpp"

namespace sdcma {

struct OfdmParams {
    std::size_t n_fft = 512;
    std::size_t n_carriers = 256;
    double cp_fraction = 0.125;

    std::size_t cp_len() const {
        const double exact = cp_fraction * static_cast<double>(n_fft);
        const double rounded = std::round(exact);
        if (!(cp_fraction >= 0.0) || std::abs(exact - rounded) > 1e-9) {
            throw ConfigError("cp_fraction * n_fft must be a non-negative integer");
        }
        return static_cast<std::size_t>(rounded);
    }

    std::size_t symbol_len() const { return n_fft + cp_len(); }

    void validate() const {
        if (n_fft == 0) throw ConfigError("n_fft must be positive");
        // bin 0 stays empty, so at most n_fft - 1 carriers fit
        if (n_carriers == 0 || n_carriers >= n_fft) throw ConfigError("n_carriers must be in 1..n_fft-1");
        if (cp_len() > n_fft) throw ConfigError("cyclic prefix longer than the DFT");
    }

    bool operator==(const OfdmParams&) const = default;
};

/// Frequency-domain content of consecutive OFDM symbols, n_fft bins each.
struct FrequencyGrid {
    std::size_t n_fft = 0;
    std::vector<cdouble> bins;

    std::size_t symbol_count() const noexcept { return n_fft == 0 ? 0 : bins.size() / n_fft; }
    std::span<cdouble> symbol(std::size_t t) { return {bins.data() + t * n_fft, n_fft}; }
    std::span<const cdouble> symbol(std::size_t t) const { return {bins.data() + t * n_fft, n_fft}; }
};

/// Serialized complex baseband: each OFDM symbol is cp_len prefix samples
/// followed by n_fft body samples.
struct TimeFrame {
    OfdmParams params;
    std::vector<cdouble> samples;

    std::size_t symbol_count() const { return samples.size() / params.symbol_len(); }
    std::span<const cdouble> symbol(std::size_t t) const {
        const std::size_t len = params.symbol_len();
        return {samples.data() + t * len, len};
    }
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW planning is not thread-safe; execution on a plan's own buffers is.
class FftPlan {
public:
    FftPlan(std::size_t n, int sign) : n_(n) {
        std::lock_guard lock(fftw_planner_mutex());
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, sign, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    void execute(std::span<const cdouble> in, std::span<cdouble> out) {
        static_assert(sizeof(cdouble) == sizeof(fftw_complex));
        std::memcpy(in_, in.data(), n_ * sizeof(fftw_complex));
        fftw_execute(plan_);
        std::memcpy(static_cast<void*>(out.data()), out_, n_ * sizeof(fftw_complex));
    }

private:
    std::size_t n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

inline FftPlan& fft_plan(std::size_t n, int sign) {
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<FftPlan>> cache;
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<FftPlan>(n, sign);
    return *slot;
}

} // namespace detail

/// Unscaled forward DFT: X[k] = sum_n x[n] exp(-j 2 pi n k / N).
inline void dft_forward(std::span<const cdouble> in, std::span<cdouble> out) {
    detail::fft_plan(in.size(), FFTW_FORWARD).execute(in, out);
}

/// Unscaled inverse DFT: x[n] = sum_k X[k] exp(+j 2 pi n k / N).
inline void dft_backward(std::span<const cdouble> in, std::span<cdouble> out) {
    detail::fft_plan(in.size(), FFTW_BACKWARD).execute(in, out);
}

inline std::size_t chunks_per_symbol(std::size_t dim_count, const OfdmParams& params) {
    const std::size_t per_chunk = carriers_per_chunk(dim_count);
    if (per_chunk == 0 || per_chunk > params.n_carriers) {
        throw ConfigError("a " + std::to_string(dim_count) + "-dimensional chunk does not fit in " +
                          std::to_string(params.n_carriers) + " carriers");
    }
    return params.n_carriers / per_chunk;
}

/// Packs chunks onto carriers across as many OFDM symbols as needed; the
/// last symbol is zero-padded. Chunk t sits in symbol t / chunks_per_symbol.
inline FrequencyGrid assemble_symbols(const DimensionGrid& dims, const OfdmParams& params) {
    params.validate();
    const std::size_t dim_count = dims.dim_count();
    const std::size_t per_symbol = chunks_per_symbol(dim_count, params);
    const std::size_t per_chunk = carriers_per_chunk(dim_count);
    const std::size_t n_symbols = (dims.chunk_count() + per_symbol - 1) / per_symbol;

    FrequencyGrid grid{params.n_fft, std::vector<cdouble>(n_symbols * params.n_fft)};
    for (std::size_t t = 0; t < dims.chunk_count(); ++t) {
        auto bins = grid.symbol(t / per_symbol);
        const std::size_t first_bin = 1 + (t % per_symbol) * per_chunk;
        const auto coords = dims.chunk(t);
        for (std::size_t d = 1; d <= dim_count; ++d) {
            const auto cc = dim_to_carrier_component(d);
            auto& bin = bins[first_bin + cc.carrier - 1];
            if (cc.component == Component::I) {
                bin.real(coords[d - 1]);
            } else {
                bin.imag(coords[d - 1]);
            }
        }
    }
    return grid;
}

/// Single OFDM symbol worth of chunks; overflowing the carrier budget is an error.
inline FrequencyGrid assemble_grid(const DimensionGrid& dims, const OfdmParams& params) {
    params.validate();
    if (dims.chunk_count() * carriers_per_chunk(dims.dim_count()) > params.n_carriers) {
        throw ConfigError(std::to_string(dims.chunk_count()) + " chunks exceed the " +
                          std::to_string(params.n_carriers) + "-carrier budget");
    }
    auto grid = assemble_symbols(dims, params);
    if (grid.bins.empty()) grid.bins.assign(params.n_fft, cdouble{});
    return grid;
}

/// Inverse of assemble_symbols. Reads every chunk slot of every symbol
/// unless `chunk_count` asks for fewer.
inline DimensionGrid extract_dim_grid(const FrequencyGrid& grid, std::size_t dim_count,
                                      const OfdmParams& params, std::size_t chunk_count = SIZE_MAX) {
    params.validate();
    if (grid.n_fft != params.n_fft) throw ShapeError("grid and OFDM parameters disagree on n_fft");
    const std::size_t per_symbol = chunks_per_symbol(dim_count, params);
    const std::size_t per_chunk = carriers_per_chunk(dim_count);
    const std::size_t available = per_symbol * grid.symbol_count();
    if (chunk_count == SIZE_MAX) chunk_count = available;
    if (chunk_count > available) throw ShapeError("grid holds fewer chunks than requested");

    DimensionGrid dims(chunk_count, dim_count);
    for (std::size_t t = 0; t < chunk_count; ++t) {
        const auto bins = grid.symbol(t / per_symbol);
        const std::size_t first_bin = 1 + (t % per_symbol) * per_chunk;
        auto coords = dims.chunk(t);
        for (std::size_t d = 1; d <= dim_count; ++d) {
            const auto cc = dim_to_carrier_component(d);
            const cdouble bin = bins[first_bin + cc.carrier - 1];
            coords[d - 1] = cc.component == Component::I ? bin.real() : bin.imag();
        }
    }
    return dims;
}

/// One complex value per occupied carrier (bins 1..n_carriers), symbol after symbol.
inline FrequencyGrid load_carriers(std::span<const cdouble> values, const OfdmParams& params) {
    params.validate();
    const std::size_t n_symbols = (values.size() + params.n_carriers - 1) / params.n_carriers;
    FrequencyGrid grid{params.n_fft, std::vector<cdouble>(n_symbols * params.n_fft)};
    for (std::size_t i = 0; i < values.size(); ++i) {
        grid.symbol(i / params.n_carriers)[1 + i % params.n_carriers] = values[i];
    }
    return grid;
}

inline std::vector<cdouble> read_carriers(const FrequencyGrid& grid, const OfdmParams& params) {
    params.validate();
    if (grid.n_fft != params.n_fft) throw ShapeError("grid and OFDM parameters disagree on n_fft");
    std::vector<cdouble> values;
    values.reserve(grid.symbol_count() * params.n_carriers);
    for (std::size_t t = 0; t < grid.symbol_count(); ++t) {
        const auto bins = grid.symbol(t);
        values.insert(values.end(), bins.begin() + 1, bins.begin() + 1 + static_cast<std::ptrdiff_t>(params.n_carriers));
    }
    return values;
}

inline TimeFrame ofdm_modulate(const FrequencyGrid& grid, const OfdmParams& params) {
    params.validate();
    if (grid.n_fft != params.n_fft || grid.bins.size() % params.n_fft != 0) {
        throw ShapeError("frequency grid length is not a whole number of " + std::to_string(params.n_fft) +
                         "-bin symbols");
    }
    const std::size_t n = params.n_fft;
    const std::size_t cp = params.cp_len();
    const double scale = 1.0 / static_cast<double>(n);

    TimeFrame frame{params, std::vector<cdouble>(grid.symbol_count() * (n + cp))};
    std::vector<cdouble> body(n);
    for (std::size_t t = 0; t < grid.symbol_count(); ++t) {
        dft_backward(grid.symbol(t), body);
        cdouble* out = frame.samples.data() + t * (n + cp);
        for (std::size_t i = 0; i < n; ++i) out[cp + i] = body[i] * scale;
        for (std::size_t i = 0; i < cp; ++i) out[i] = out[n + i];
    }
    return frame;
}

inline FrequencyGrid ofdm_demodulate(const TimeFrame& frame, const OfdmParams& params) {
    params.validate();
    const std::size_t n = params.n_fft;
    const std::size_t len = params.symbol_len();
    if (frame.samples.size() % len != 0) {
        throw ShapeError("frame length " + std::to_string(frame.samples.size()) + " is not a multiple of " +
                         std::to_string(len));
    }
    const std::size_t n_symbols = frame.samples.size() / len;
    FrequencyGrid grid{n, std::vector<cdouble>(n_symbols * n)};
    for (std::size_t t = 0; t < n_symbols; ++t) {
        std::span<const cdouble> body(frame.samples.data() + t * len + params.cp_len(), n);
        dft_forward(body, grid.symbol(t));
    }
    return grid;
}

// Debug dump: 16-byte header ("SDCMA1", 2 pad bytes, u32 n_fft, u32 cp_len),
// then interleaved little-endian float64 re/im.

struct FrameDump {
    std::uint32_t n_fft = 0;
    std::uint32_t cp_len = 0;
    std::vector<cdouble> samples;
};

namespace detail {

template <typename T>
void put_le(std::ostream& os, T value) {
    auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    os.write(reinterpret_cast<const char*>(raw.data()), raw.size());
}

template <typename T>
T get_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> raw{};
    if (!is.read(reinterpret_cast<char*>(raw.data()), raw.size())) throw ShapeError("truncated frame dump");
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    return std::bit_cast<T>(raw);
}

} // namespace detail

inline constexpr char kFrameDumpMagic[6] = {'S', 'D', 'C', 'M', 'A', '1'};

inline void write_frame_dump(std::ostream& os, const TimeFrame& frame) {
    os.write(kFrameDumpMagic, sizeof(kFrameDumpMagic));
    os.put('\0').put('\0');
    detail::put_le(os, static_cast<std::uint32_t>(frame.params.n_fft));
    detail::put_le(os, static_cast<std::uint32_t>(frame.params.cp_len()));
    for (auto s : frame.samples) {
        detail::put_le(os, s.real());
        detail::put_le(os, s.imag());
    }
}

inline FrameDump read_frame_dump(std::istream& is) {
    char magic[8] = {};
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kFrameDumpMagic, sizeof(kFrameDumpMagic)) != 0) {
        throw ShapeError("not an SDCMA1 frame dump");
    }
    FrameDump dump;
    dump.n_fft = detail::get_le<std::uint32_t>(is);
    dump.cp_len = detail::get_le<std::uint32_t>(is);
    while (is.peek() != std::char_traits<char>::eof()) {
        const double re = detail::get_le<double>(is);
        const double im = detail::get_le<double>(is);
        dump.samples.emplace_back(re, im);
    }
    return dump;
}

} // namespace sdcma
