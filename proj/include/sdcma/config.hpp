#pragma once

// key = value run configuration. Lists use bracket syntax:
//   scenario = 3u-qpsk
//   s2d = [[1,2],[2,3],[3,1]]
//   powers = [16,4,1]

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <system_error>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdcma/errors.hpp"
#include "sdcma/harness.hpp"

namespace sdcma {

struct RunRequest {
    std::optional<std::string> scenario;
    std::optional<SchemeName> constellation;
    std::optional<std::vector<std::vector<std::size_t>>> s2d;
    std::optional<std::vector<double>> powers;
    std::optional<std::size_t> users;
    std::vector<AccessScheme> schemes{AccessScheme::PdSdcma, AccessScheme::PdNoma};
    OfdmParams ofdm;
    std::size_t n_symbols = 1000;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    SnrGrid snr;
    std::uint64_t early_stop_errors = 200;
    std::string csv_path;
    std::string svg_path;

    LinkConfig link(AccessScheme scheme) const {
        SchemeName name = SchemeName::Qpsk;
        std::vector<std::vector<std::size_t>> rows;
        std::vector<double> ratios;
        if (scenario) {
            const auto& preset = find_preset(*scenario);
            name = preset.constellation;
            rows = preset.s2d;
            ratios = preset.power_ratios;
        }
        if (constellation) name = *constellation;
        if (powers) ratios = *powers;
        if (ratios.empty()) throw ConfigError("no scenario and no power ratios given");
        if (users && *users != ratios.size()) throw ConfigError("users does not match the number of power ratios");
        if (s2d) {
            rows = *s2d;
        } else if (!scenario || powers) {
            rows = circulant_s2d(ratios.size()).rows();
        }
        return make_link(scheme, name, std::move(rows), ratios, ofdm, n_symbols);
    }

    SimConfig sim(AccessScheme scheme) const {
        SimConfig cfg;
        cfg.link = link(scheme);
        cfg.snr = snr;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.early_stop_errors = early_stop_errors;
        cfg.validate();
        return cfg;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

inline nlohmann::json parse_list(const std::string& key, const std::string& value) {
    try {
        auto j = nlohmann::json::parse(value);
        if (!j.is_array()) throw ConfigError(key + " must be a bracketed list");
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse " + key + " = " + value + ": " + e.what());
    }
}

template <typename T>
T parse_scalar(const std::string& key, const std::string& value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
    return out;
}

} // namespace detail

inline void apply_setting(RunRequest& req, const std::string& key, const std::string& value) {
    using detail::parse_scalar;
    try {
        if (key == "scenario") {
            find_preset(value);
            req.scenario = value;
        } else if (key == "constellation") {
            req.constellation = parse_scheme_name(value);
        } else if (key == "scheme") {
            if (value == "both") {
                req.schemes = {AccessScheme::PdSdcma, AccessScheme::PdNoma};
            } else {
                req.schemes = {parse_access_scheme(value)};
            }
        } else if (key == "s2d") {
            req.s2d = detail::parse_list(key, value).get<std::vector<std::vector<std::size_t>>>();
        } else if (key == "powers") {
            req.powers = detail::parse_list(key, value).get<std::vector<double>>();
        } else if (key == "users") {
            req.users = parse_scalar<std::size_t>(key, value);
        } else if (key == "n_fft") {
            req.ofdm.n_fft = parse_scalar<std::size_t>(key, value);
        } else if (key == "n_carriers") {
            req.ofdm.n_carriers = parse_scalar<std::size_t>(key, value);
        } else if (key == "cp_fraction") {
            req.ofdm.cp_fraction = parse_scalar<double>(key, value);
        } else if (key == "symbols" || key == "n_symbols") {
            req.n_symbols = parse_scalar<std::size_t>(key, value);
        } else if (key == "trials") {
            req.trials = parse_scalar<std::size_t>(key, value);
        } else if (key == "seed") {
            req.seed = parse_scalar<std::uint64_t>(key, value);
        } else if (key == "snr_start") {
            req.snr.start = parse_scalar<double>(key, value);
        } else if (key == "snr_stop") {
            req.snr.stop = parse_scalar<double>(key, value);
        } else if (key == "snr_step") {
            req.snr.step = parse_scalar<double>(key, value);
        } else if (key == "early_stop") {
            req.early_stop_errors = parse_scalar<std::uint64_t>(key, value);
        } else if (key == "csv") {
            req.csv_path = value;
        } else if (key == "svg") {
            req.svg_path = value;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad value for " + key + ": " + e.what());
    }
}

/// Reads `key = value` lines; `#` starts a comment.
inline RunRequest load_config(std::istream& is, RunRequest req = {}) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(req, detail::trim(std::string_view(text).substr(0, eq)),
                      detail::trim(std::string_view(text).substr(eq + 1)));
    }
    return req;
}

} // namespace sdcma
