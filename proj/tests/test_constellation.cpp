#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sdcma/constellation.hpp"

using namespace sdcma;

namespace {

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
    BitVector bits(n);
    for (auto& b : bits) b = static_cast<Bit>(rng() & 1u);
    return bits;
}

} // namespace

TEST(Constellation, QpskUsesUnitSignAlphabetBeforeScaling) {
    const auto c = build_scheme(SchemeName::Qpsk);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c.bits_per_symbol, 2u);
    for (auto p : c.points) {
        EXPECT_NEAR(std::abs(p.real() * std::sqrt(2.0)), 1.0, 1e-15);
        EXPECT_NEAR(std::abs(p.imag() * std::sqrt(2.0)), 1.0, 1e-15);
    }
    const auto p00 = c.point(0);
    EXPECT_NEAR(std::abs(p00.real()), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(p00.imag()), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::norm(p00), 1.0, 1e-15);
}

TEST(Constellation, Qam16MatchesEnumeratedGrid) {
    // oracle: the 16 points of {+-1,+-3}^2 have mean square radius 10
    std::set<std::pair<int, int>> grid;
    double mean_sq = 0.0;
    for (int x : {-3, -1, 1, 3}) {
        for (int y : {-3, -1, 1, 3}) {
            grid.insert({x, y});
            mean_sq += x * x + y * y;
        }
    }
    mean_sq /= 16.0;
    ASSERT_DOUBLE_EQ(mean_sq, 10.0);

    const auto c = build_scheme(SchemeName::Qam16);
    ASSERT_EQ(c.size(), 16u);
    std::set<std::pair<int, int>> seen;
    for (auto p : c.points) {
        const double x = p.real() * std::sqrt(mean_sq);
        const double y = p.imag() * std::sqrt(mean_sq);
        EXPECT_NEAR(x, std::round(x), 1e-12);
        EXPECT_NEAR(y, std::round(y), 1e-12);
        seen.insert({static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))});
    }
    EXPECT_EQ(seen, grid);
    EXPECT_NEAR(c.average_energy(), 1.0, 1e-12);
}

TEST(Constellation, SchemeInvariants) {
    for (auto name : {SchemeName::Qpsk, SchemeName::Qam16}) {
        const auto c = build_scheme(name);
        EXPECT_EQ(c.size(), std::size_t{1} << c.bits_per_symbol);
        EXPECT_NEAR(c.average_energy(), 1.0, 1e-12);

        double dmin = 1e9;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                EXPECT_GT(std::abs(c.points[i] - c.points[j]), 1e-9) << "duplicate point";
                dmin = std::min(dmin, std::abs(c.points[i] - c.points[j]));
            }
        }
        int neighbour_pairs = 0;
        for (unsigned i = 0; i < c.size(); ++i) {
            for (unsigned j = i + 1; j < c.size(); ++j) {
                if (std::abs(std::abs(c.points[i] - c.points[j]) - dmin) < 1e-9) {
                    EXPECT_EQ(oracle::hamming(i, j), 1) << "labels " << i << ", " << j;
                    ++neighbour_pairs;
                }
            }
        }
        // square grid with L levels per axis: 2 L (L - 1) nearest-neighbour pairs
        const int levels = 1 << (c.bits_per_symbol / 2);
        EXPECT_EQ(neighbour_pairs, 2 * levels * (levels - 1));
    }
}

TEST(Constellation, ParsesNamesAndRejectsUnknown) {
    EXPECT_EQ(parse_scheme_name("qpsk"), SchemeName::Qpsk);
    EXPECT_EQ(parse_scheme_name("16qam"), SchemeName::Qam16);
    EXPECT_THROW(parse_scheme_name("8psk"), ConfigError);
    EXPECT_THROW(build_scheme("64qam"), ConfigError);
}

TEST(MapBits, LabelledLookup) {
    const auto c = build_scheme(SchemeName::Qpsk);
    const BitVector bits{0, 0, 1, 1};
    const auto s = map_bits(bits, c);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], c.point(0));
    EXPECT_EQ(s[1], c.point(3));
}

TEST(MapBits, Qam16EnergiesComeFromThreeRings) {
    const auto c = build_scheme(SchemeName::Qam16);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 64; ++trial) {
        const auto s = map_bits(random_bits(4, rng), c);
        ASSERT_EQ(s.size(), 1u);
        const double e = std::norm(s[0]);
        const bool ring = std::abs(e - 0.2) < 1e-12 || std::abs(e - 1.0) < 1e-12 || std::abs(e - 1.8) < 1e-12;
        EXPECT_TRUE(ring) << e;
    }
}

TEST(MapBits, EmptyAndShapeErrors) {
    const auto c = build_scheme(SchemeName::Qam16);
    EXPECT_TRUE(map_bits(BitVector{}, c).empty());
    EXPECT_THROW(map_bits(BitVector{0, 1, 1}, c), ShapeError);
    EXPECT_THROW(map_bits(BitVector{0, 1, 2, 0}, c), ShapeError);
}

TEST(DemapHard, ExactPointsReturnTheirLabels) {
    for (auto name : {SchemeName::Qpsk, SchemeName::Qam16}) {
        const auto c = build_scheme(name);
        for (unsigned label = 0; label < c.size(); ++label) EXPECT_EQ(c.nearest_label(c.points[label]), label);
    }
}

TEST(DemapHard, RoundTripProperty) {
    std::mt19937_64 rng(17);
    for (auto name : {SchemeName::Qpsk, SchemeName::Qam16}) {
        const auto c = build_scheme(name);
        for (int trial = 0; trial < 200; ++trial) {
            const auto bits = random_bits(c.bits_per_symbol * (rng() % 64), rng);
            EXPECT_EQ(demap_hard(map_bits(bits, c), c), bits);
        }
    }
}

TEST(DemapHard, NoiseInsideDecisionRegionIsHarmless) {
    std::mt19937_64 rng(29);
    // QPSK regions are quadrants; 16QAM inner half-spacing is 1/sqrt(10)
    const std::pair<SchemeName, double> cases[] = {{SchemeName::Qpsk, 1.0 / std::sqrt(2.0)},
                                                   {SchemeName::Qam16, 1.0 / std::sqrt(10.0)}};
    for (auto [name, half] : cases) {
        const auto c = build_scheme(name);
        std::uniform_real_distribution<double> u(-(half - 1e-6), half - 1e-6);
        for (int trial = 0; trial < 20000; ++trial) {
            const unsigned label = static_cast<unsigned>(rng() % c.size());
            EXPECT_EQ(c.nearest_label(c.points[label] + cdouble{u(rng), u(rng)}), label);
        }
    }
}

TEST(DemapHard, TiesPickSmallestLabel) {
    const auto qpsk = build_scheme(SchemeName::Qpsk);
    EXPECT_EQ(qpsk.nearest_label({0.0, 0.0}), 0u);
    const auto qam = build_scheme(SchemeName::Qam16);
    // origin is equidistant from the four inner points 0101, 0111, 1101, 1111
    EXPECT_EQ(qam.nearest_label({0.0, 0.0}), 0b0101u);
    // midway between labels 3 and 2 on the Q axis of the lowest I column
    const cdouble mid = 0.5 * (qam.point(2) + qam.point(3));
    EXPECT_EQ(qam.nearest_label(mid), 2u);
}
