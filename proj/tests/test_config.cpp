#include <gtest/gtest.h>

#include <sstream>

#include "sdcma/config.hpp"

using namespace sdcma;
using Rows = std::vector<std::vector<std::size_t>>;

TEST(Config, ParsesKeyValueFile) {
    std::istringstream in(R"(# custom three-user run
constellation = qpsk
s2d = [[1,2],[2,3],[3,1]]
powers = [16, 4, 1]
scheme = pd-sdcma
n_fft = 256
n_carriers = 128
cp_fraction = 0.25
symbols = 50
trials = 3
seed = 9
snr_start = 2
snr_stop = 8
snr_step = 0.5
csv = out.csv
)");
    const auto req = load_config(in);
    ASSERT_EQ(req.schemes.size(), 1u);
    const auto cfg = req.sim(AccessScheme::PdSdcma);
    EXPECT_EQ(cfg.link.s2d->rows(), (Rows{{1, 2}, {2, 3}, {3, 1}}));
    EXPECT_DOUBLE_EQ(cfg.link.alloc.weights[0], 16.0 / 21);
    EXPECT_EQ(cfg.link.ofdm.cp_len(), 64u);
    EXPECT_EQ(cfg.link.n_symbols, 50u);
    EXPECT_EQ(cfg.trials, 3u);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.snr.values().size(), 13u);
    EXPECT_EQ(req.csv_path, "out.csv");
}

TEST(Config, ScenarioPresetAndCirculantDefault) {
    std::istringstream preset("scenario = 5u-qpsk\n");
    const auto a = load_config(preset).link(AccessScheme::PdSdcma);
    EXPECT_EQ(a.s2d->dim_count(), 5u);
    EXPECT_EQ(a.users(), 5u);

    // powers alone: the circulant strategy is generated
    std::istringstream custom("powers = [9, 3, 1, 0.5]\nusers = 4\n");
    const auto req = load_config(custom);
    EXPECT_EQ(req.link(AccessScheme::PdSdcma).s2d->rows(), (Rows{{1, 2}, {2, 3}, {3, 4}, {4, 1}}));
    EXPECT_FALSE(req.link(AccessScheme::PdNoma).s2d.has_value());
}

TEST(Config, Errors) {
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_config(in);
    };
    EXPECT_THROW(load("colour = blue\n"), ConfigError);
    EXPECT_THROW(load("powers = 16,4,1\n"), ConfigError);
    EXPECT_THROW(load("s2d = [[1,2],[x]]\n"), ConfigError);
    EXPECT_THROW(load("trials = many\n"), ConfigError);
    EXPECT_THROW(load("just a line\n"), ConfigError);
    EXPECT_THROW(load("scenario = 9u-qpsk\n"), ConfigError);
    EXPECT_THROW(load("powers = [4,4]\n").link(AccessScheme::PdNoma), ConfigError);
    EXPECT_THROW(load("powers = [4,2]\nusers = 3\n").link(AccessScheme::PdNoma), ConfigError);
    EXPECT_THROW(load("scheme = tdma\n"), ConfigError);
}
