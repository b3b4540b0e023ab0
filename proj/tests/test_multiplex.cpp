#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sdcma/channel.hpp"
#include "sdcma/harness.hpp"
#include "sdcma/multiplex.hpp"

using namespace sdcma;

namespace {

TimeFrame random_frame(const OfdmParams& p, std::size_t symbols, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    FrequencyGrid g{p.n_fft, std::vector<cdouble>(p.n_fft * symbols)};
    for (std::size_t t = 0; t < symbols; ++t) {
        for (std::size_t k = 1; k <= p.n_carriers; ++k) g.symbol(t)[k] = {n(rng), n(rng)};
    }
    return ofdm_modulate(g, p);
}

} // namespace

TEST(NormalizePowers, StrategyTableRatios) {
    const auto a = normalize_powers(std::vector{16.0, 4.0, 1.0});
    ASSERT_EQ(a.users(), 3u);
    EXPECT_DOUBLE_EQ(a.weights[0], 16.0 / 21);
    EXPECT_DOUBLE_EQ(a.weights[1], 4.0 / 21);
    EXPECT_DOUBLE_EQ(a.weights[2], 1.0 / 21);

    const std::vector<double> five{256, 64, 16, 4, 1};
    const auto b = normalize_powers(five);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(b.weights[i], five[i] / 341);
    EXPECT_NEAR(std::accumulate(b.weights.begin(), b.weights.end(), 0.0), 1.0, 1e-12);

    EXPECT_EQ(normalize_powers(std::vector{1.0}).weights, std::vector{1.0});
}

TEST(NormalizePowers, SortsStrongestFirst) {
    const auto a = normalize_powers(std::vector{1.0, 16.0});
    EXPECT_DOUBLE_EQ(a.weights[0], 16.0 / 17);
    EXPECT_DOUBLE_EQ(a.weights[1], 1.0 / 17);
}

TEST(NormalizePowers, RejectsBadRatios) {
    EXPECT_THROW(normalize_powers(std::vector{1.0, 0.0}), ConfigError);
    EXPECT_THROW(normalize_powers(std::vector{-2.0, 1.0}), ConfigError);
    EXPECT_THROW(normalize_powers(std::vector{4.0, 4.0}), ConfigError);
    EXPECT_THROW(normalize_powers(std::vector<double>{}), ConfigError);
}

TEST(Superpose, SingleUserIsIdentity) {
    std::mt19937_64 rng(1);
    const OfdmParams p;
    const std::vector<TimeFrame> frames{random_frame(p, 2, rng)};
    const auto z = superpose(frames, normalize_powers(std::vector{1.0}));
    EXPECT_EQ(z.samples, frames[0].samples);
}

TEST(Superpose, EqualFramesAddAmplitudes) {
    std::mt19937_64 rng(2);
    const OfdmParams p;
    const auto f = random_frame(p, 1, rng);
    const std::vector<TimeFrame> frames{f, f};
    const auto z = superpose(frames, normalize_powers(std::vector{0.8, 0.2}));
    const double k = std::sqrt(0.8) + std::sqrt(0.2);
    for (std::size_t i = 0; i < f.samples.size(); ++i) EXPECT_LT(std::abs(z.samples[i] - k * f.samples[i]), 1e-15);
    // prefix structure survives the sum
    for (std::size_t i = 0; i < p.cp_len(); ++i) EXPECT_EQ(z.samples[i], z.samples[p.n_fft + i]);
}

TEST(Superpose, MismatchedFramesRejected) {
    std::mt19937_64 rng(3);
    const OfdmParams p;
    const std::vector<TimeFrame> frames{random_frame(p, 1, rng), random_frame(p, 2, rng)};
    EXPECT_THROW(superpose(frames, normalize_powers(std::vector{2.0, 1.0})), ShapeError);
    EXPECT_THROW(superpose(frames, normalize_powers(std::vector{1.0})), ShapeError);
}

TEST(Superpose, PrivateDimensionsCarryScaledCoordinates) {
    // 2 users on [1 2; 2 3]: dimension 1 is user 1 only, dimension 3 user 2 only
    const auto link = make_link(find_preset("2u-16qam"), AccessScheme::PdSdcma, {}, 4);
    std::mt19937_64 rng(4);
    std::vector<BitVector> bits(2, BitVector(link.bits_per_user()));
    for (auto& b : bits) fill_random_bits(b, rng);

    const auto frame = transmit(bits, link);
    const auto rx = extract_dim_grid(ofdm_demodulate(frame, link.ofdm), 3, link.ofdm);

    const auto s1 = map_bits(bits[0], link.constellation);
    const auto s2 = map_bits(bits[1], link.constellation);
    const auto g1 = reconstruct_user(s1, {1, 2}, 3);
    const auto g2 = reconstruct_user(s2, {2, 3}, 3);
    const double a1 = link.alloc.amplitude(0), a2 = link.alloc.amplitude(1);
    for (std::size_t t = 0; t < rx.chunk_count(); ++t) {
        EXPECT_NEAR(rx.at(t, 1), a1 * g1.at(t, 1), 1e-12);
        EXPECT_NEAR(rx.at(t, 3), a2 * g2.at(t, 3), 1e-12);
        EXPECT_NEAR(rx.at(t, 2), a1 * g1.at(t, 2) + a2 * g2.at(t, 2), 1e-12);
    }
}

TEST(Superpose, IndependentFramesAddPowers) {
    std::mt19937_64 rng(5);
    const OfdmParams p;
    // ~2.3e5 samples per frame
    std::vector<TimeFrame> frames{random_frame(p, 400, rng), random_frame(p, 400, rng), random_frame(p, 400, rng)};
    const double p0 = measure_power(frames[0].samples);
    for (auto& f : frames) {
        const double scale = std::sqrt(p0 / measure_power(f.samples));
        for (auto& s : f.samples) s *= scale;
    }
    const auto alloc = normalize_powers(std::vector{16.0, 4.0, 1.0});
    const double composite = measure_power(superpose(frames, alloc).samples);
    EXPECT_NEAR(composite / p0, 1.0, 0.05);
    double coherent = 0.0;
    for (std::size_t u = 0; u < 3; ++u) coherent += alloc.amplitude(u);
    EXPECT_LE(composite, p0 * coherent * coherent);
}

TEST(Transmit, CommutesWithModulation) {
    // superposing modulated frames equals modulating the superposed grid
    const auto link = make_link(find_preset("3u-qpsk"), AccessScheme::PdSdcma, {}, 2);
    std::mt19937_64 rng(6);
    std::vector<BitVector> bits(3, BitVector(link.bits_per_user()));
    for (auto& b : bits) fill_random_bits(b, rng);
    const auto frame = transmit(bits, link);

    DimensionGrid sum(link.symbols_per_user(), 3);
    for (std::size_t u = 0; u < 3; ++u) {
        const auto g = reconstruct_user(map_bits(bits[u], link.constellation), link.s2d->pair(u), 3);
        for (std::size_t i = 0; i < sum.values().size(); ++i) sum.values()[i] += link.alloc.amplitude(u) * g.values()[i];
    }
    const auto direct = ofdm_modulate(assemble_symbols(sum, link.ofdm), link.ofdm);
    ASSERT_EQ(direct.samples.size(), frame.samples.size());
    for (std::size_t i = 0; i < frame.samples.size(); ++i) EXPECT_LT(std::abs(direct.samples[i] - frame.samples[i]), 1e-12);
}

TEST(Transmit, RejectsWrongBitCounts) {
    const auto link = make_link(find_preset("3u-qpsk"), AccessScheme::PdNoma, {}, 1);
    std::vector<BitVector> bits(3, BitVector(link.bits_per_user()));
    bits[1].pop_back();
    EXPECT_THROW(transmit(bits, link), ShapeError);
    bits.pop_back();
    EXPECT_THROW(transmit(bits, link), ShapeError);
}
