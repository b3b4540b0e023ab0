#pragma once

// CSV and SVG output for BER records.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "sdcma/errors.hpp"
#include "sdcma/harness.hpp"

namespace sdcma {

inline constexpr std::string_view kCsvHeader = "scheme,user,snr_db,errors,bits,ber,trials,seed";

namespace detail {

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

template <typename T>
T parse_number(std::string_view field, std::string_view column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ShapeError("bad " + std::string(column) + " field '" + std::string(field) + "'");
    }
    return value;
}

inline std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline void write_csv(std::ostream& os, std::span<const BerRecord> records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.scheme << ',' << r.user << ',' << detail::format_double(r.snr_db) << ',' << r.errors << ','
           << r.bits << ',' << detail::format_double(r.ber) << ',' << r.trials << ',' << r.seed << '\n';
    }
}

inline std::string to_csv(std::span<const BerRecord> records) {
    std::ostringstream os;
    write_csv(os, records);
    return os.str();
}

inline std::vector<BerRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw ShapeError("missing or unexpected CSV header");
    std::vector<BerRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 8) throw ShapeError("CSV row has " + std::to_string(fields.size()) + " fields");
        BerRecord r;
        r.scheme = std::string(fields[0]);
        r.user = detail::parse_number<std::size_t>(fields[1], "user");
        r.snr_db = detail::parse_number<double>(fields[2], "snr_db");
        r.errors = detail::parse_number<std::uint64_t>(fields[3], "errors");
        r.bits = detail::parse_number<std::uint64_t>(fields[4], "bits");
        r.ber = detail::parse_number<double>(fields[5], "ber");
        r.trials = detail::parse_number<std::size_t>(fields[6], "trials");
        r.seed = detail::parse_number<std::uint64_t>(fields[7], "seed");
        records.push_back(std::move(r));
    }
    return records;
}

struct SvgOptions {
    std::string title = "BER vs SNR";
    double width = 820;
    double height = 520;
    /// Lowest decade shown; zero-error points are not drawn.
    double min_ber = 1e-6;
    std::string caption =
        "SNR = composite transmit power (cyclic prefix included) / complex noise power per sample";
};

/// Log-BER line chart, one polyline per (scheme, user).
inline std::string svg_chart(std::span<const BerRecord> records, const SvgOptions& opt = {}) {
    const double left = 80, right = 190, top = 50, bottom = 80;
    const double plot_w = opt.width - left - right;
    const double plot_h = opt.height - top - bottom;

    double x_min = 0.0, x_max = 1.0;
    if (!records.empty()) {
        auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                            [](const auto& a, const auto& b) { return a.snr_db < b.snr_db; });
        x_min = lo->snr_db;
        x_max = hi->snr_db > lo->snr_db ? hi->snr_db : lo->snr_db + 1.0;
    }
    const int top_decade = 0;
    int bottom_decade = static_cast<int>(std::floor(std::log10(opt.min_ber)));
    for (const auto& r : records) {
        if (r.ber > 0.0) bottom_decade = std::min(bottom_decade, static_cast<int>(std::floor(std::log10(r.ber))));
    }
    auto px = [&](double snr) { return left + (snr - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double ber) {
        const double y = std::log10(ber);
        return top + (top_decade - y) / static_cast<double>(top_decade - bottom_decade) * plot_h;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
       << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n"
       << "<text x=\"" << left + plot_w / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
       << detail::xml_escape(opt.title) << "</text>\n";

    // BER decades
    for (int d = top_decade; d >= bottom_decade; --d) {
        const double y = py(std::pow(10.0, d));
        os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e"
           << d << "</text>\n";
    }
    // SNR ticks, roughly ten of them
    const double span = x_max - x_min;
    const double raw = span / 10.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double tick = raw / mag < 2 ? 2 * mag : raw / mag < 5 ? 5 * mag : 10 * mag;
    for (double x = std::ceil(x_min / tick) * tick; x <= x_max + 1e-9; x += tick) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << top << "\" x2=\"" << px(x) << "\" y2=\"" << top + plot_h
           << "\" stroke=\"#eeeeee\"/>\n"
           << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
           << detail::format_double(x) << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 42
       << "\" text-anchor=\"middle\" font-size=\"14\">SNR (dB)</text>\n"
       << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
       << top + plot_h / 2 << ")\">BER</text>\n"
       << "<text x=\"" << left << "\" y=\"" << opt.height - 12 << "\" font-size=\"11\" fill=\"#555555\">"
       << detail::xml_escape(opt.caption) << "</text>\n";

    std::map<std::pair<std::string, std::size_t>, std::vector<const BerRecord*>> curves;
    for (const auto& r : records) curves[{r.scheme, r.user}].push_back(&r);

    static constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                            "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::size_t index = 0;
    for (auto& [key, pts] : curves) {
        std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->snr_db < b->snr_db; });
        const char* color = palette[(key.second - 1) % palette.size()];
        const bool dashed = key.first == "pd-noma";
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
           << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        bool first = true;
        for (const auto* p : pts) {
            if (p->ber <= 0.0) continue;
            os << (first ? "" : " ") << px(p->snr_db) << ',' << py(p->ber);
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(index);
        os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 40
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\""
           << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
           << "<text x=\"" << left + plot_w + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
           << detail::xml_escape(key.first) << " user " << key.second << "</text>\n";
        ++index;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace sdcma
