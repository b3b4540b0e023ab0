// Command-line front end: BER sweeps and a quick self-check.
//
//   sdcma sweep --scenario 3u-qpsk --snr-start 0 --snr-stop 30 --csv out.csv --svg out.svg
//   sdcma validate

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sdcma.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void print_crossings(std::ostream& os, const std::vector<sdcma::BerRecord>& records,
                     const std::vector<sdcma::AccessScheme>& schemes, std::size_t users) {
    os << "SNR at BER 1e-3:\n";
    for (auto scheme : schemes) {
        const auto curve = sdcma::filter_scheme(records, scheme);
        for (std::size_t u = 1; u <= users; ++u) {
            const auto x = sdcma::snr_at_ber(curve, u, 1e-3);
            os << "  " << sdcma::to_string(scheme) << " user " << u << ": ";
            if (x.reached()) {
                os << *x.snr_db << " dB\n";
            } else {
                os << "not reached (boundary BER " << x.boundary_ber << ")\n";
            }
        }
    }
}

int run_sweep(const std::string& config_path, const std::string& scenario, const std::string& scheme,
              const CLI::App& cmd, double snr_start, double snr_stop, double snr_step, std::size_t trials,
              std::size_t symbols, std::uint64_t seed, std::uint64_t early_stop, const std::string& csv,
              const std::string& svg) {
    sdcma::RunRequest req;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw sdcma::ConfigError("cannot open config file " + config_path);
        req = sdcma::load_config(in);
    }
    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--scenario")) sdcma::apply_setting(req, "scenario", scenario);
    if (given("--scheme")) sdcma::apply_setting(req, "scheme", scheme);
    if (given("--snr-start")) req.snr.start = snr_start;
    if (given("--snr-stop")) req.snr.stop = snr_stop;
    if (given("--snr-step")) req.snr.step = snr_step;
    if (given("--trials")) req.trials = trials;
    if (given("--symbols")) req.n_symbols = symbols;
    if (given("--seed")) req.seed = seed;
    if (given("--early-stop")) req.early_stop_errors = early_stop;
    if (given("--csv")) req.csv_path = csv;
    if (given("--svg")) req.svg_path = svg;
    if (!req.scenario && !req.powers) throw sdcma::ConfigError("give --scenario or --config");

    // Build every config up front so configuration errors surface before any work.
    std::vector<sdcma::SimConfig> configs;
    for (auto s : req.schemes) configs.push_back(req.sim(s));

    std::vector<sdcma::BerRecord> records;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& cfg : configs) {
        auto part = sdcma::sweep(cfg);
        records.insert(records.end(), part.begin(), part.end());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (req.csv_path.empty()) {
        sdcma::write_csv(std::cout, records);
    } else {
        std::ofstream out(req.csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + req.csv_path);
        sdcma::write_csv(out, records);
    }
    if (!req.svg_path.empty()) {
        std::ofstream out(req.svg_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + req.svg_path);
        sdcma::SvgOptions opt;
        opt.title = (req.scenario ? *req.scenario : std::string("custom")) + ": BER vs SNR";
        out << sdcma::svg_chart(records, opt);
    }
    std::ostream& log = req.csv_path.empty() ? std::cerr : std::cout;
    print_crossings(log, records, req.schemes, configs.front().link.users());
    log << "elapsed " << seconds << " s\n";
    return 0;
}

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

double qpsk_theory(double snr_db, const sdcma::OfdmParams& ofdm) {
    // single user: per-carrier Es/N0 = SNR * n_fft / n_carriers, two bits per symbol
    const double ebn0 = std::pow(10.0, snr_db / 10.0) * static_cast<double>(ofdm.n_fft) /
                        static_cast<double>(ofdm.n_carriers) / 2.0;
    return 0.5 * std::erfc(std::sqrt(ebn0));
}

int run_validate() {
    using namespace sdcma;
    std::vector<Check> checks;

    {
        bool ok = true;
        std::mt19937_64 rng(7);
        for (auto name : {SchemeName::Qpsk, SchemeName::Qam16}) {
            const auto c = build_scheme(name);
            BitVector bits(c.bits_per_symbol * 1000);
            for (auto& b : bits) b = static_cast<Bit>(rng() & 1u);
            ok = ok && demap_hard(map_bits(bits, c), c) == bits && std::abs(c.average_energy() - 1.0) < 1e-12;
        }
        checks.push_back({"constellation round trip + unit energy", ok, ""});
    }
    {
        OfdmParams p;
        std::mt19937_64 rng(11);
        std::normal_distribution<double> n;
        FrequencyGrid g{p.n_fft, std::vector<cdouble>(p.n_fft * 4)};
        for (auto& b : g.bins) b = {n(rng), n(rng)};
        const auto back = ofdm_demodulate(ofdm_modulate(g, p), p);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.bins.size(); ++i) worst = std::max(worst, std::abs(back.bins[i] - g.bins[i]));
        checks.push_back({"OFDM round trip", worst < 1e-10, "max error " + std::to_string(worst)});
    }
    for (const auto& preset : scenario_presets()) {
        for (auto scheme : {AccessScheme::PdSdcma, AccessScheme::PdNoma}) {
            SimConfig cfg;
            cfg.link = make_link(preset, scheme, {}, 100);
            cfg.trials = 1;
            cfg.snr = {300, 300, 1};
            const auto recs = run_point(cfg, 300.0);
            const bool ok = std::all_of(recs.begin(), recs.end(), [](const BerRecord& r) { return r.errors == 0; });
            checks.push_back({"noiseless " + preset.name + " " + std::string(to_string(scheme)), ok, ""});
        }
    }
    {
        const auto qpsk = build_scheme(SchemeName::Qpsk);
        const auto two = joint_constellation(qpsk, S2DMatrix({{1, 2}, {2, 3}}), normalize_powers(std::vector{16.0, 1.0}));
        const std::size_t full = count_distinct(two);
        const std::size_t plane = count_distinct(project_points(two, {1, 2}));
        checks.push_back({"joint QPSK geometry 16 -> 8", full == 16 && plane == 8,
                          std::to_string(full) + " -> " + std::to_string(plane)});
        const double d3 = min_distance(to_points(noma_composite(qpsk, normalize_powers(std::vector{16.0, 4.0, 1.0}))));
        const double d5 = min_distance(
            to_points(noma_composite(qpsk, normalize_powers(std::vector{256.0, 64.0, 16.0, 4.0, 1.0}))));
        checks.push_back({"PD-NOMA MED shrinks 3 -> 5 users", d5 < d3,
                          std::to_string(d3) + " -> " + std::to_string(d5)});
    }
    {
        SimConfig cfg;
        cfg.link = make_link(AccessScheme::PdNoma, SchemeName::Qpsk, {}, std::vector{1.0}, {}, 200);
        cfg.trials = 4;
        cfg.seed = 5;
        cfg.early_stop_errors = 0;
        cfg.snr = {0, 6, 3};
        bool ok = true;
        std::string detail;
        for (const auto& r : sweep(cfg)) {
            const double theory = qpsk_theory(r.snr_db, cfg.link.ofdm);
            const double z = std::abs(r.ber - theory) / std::sqrt(theory * (1 - theory) / static_cast<double>(r.bits));
            ok = ok && z < 3.0;
            detail += std::to_string(r.snr_db) + " dB z=" + std::to_string(z) + "; ";
        }
        checks.push_back({"single-user QPSK calibration", ok, detail});
    }

    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.ok ? "PASS  " : "FAIL  ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                  << '\n';
        all = all && c.ok;
    }
    return all ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PD-SDCMA / PD-NOMA link-level BER simulator"};
    app.require_subcommand(1);

    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo BER sweep over an SNR grid");
    std::string config_path, scenario, scheme = "both", csv, svg;
    double snr_start = 0, snr_stop = 40, snr_step = 1;
    std::size_t trials = 10, symbols = 1000;
    std::uint64_t seed = 1, early_stop = 200;
    sweep_cmd->add_option("--config", config_path, "key=value config file");
    sweep_cmd->add_option("--scenario", scenario, "preset: 2u-16qam, 3u-qpsk or 5u-qpsk");
    sweep_cmd->add_option("--scheme", scheme, "pd-sdcma, pd-noma or both");
    sweep_cmd->add_option("--snr-start", snr_start, "first SNR point (dB)");
    sweep_cmd->add_option("--snr-stop", snr_stop, "last SNR point (dB)");
    sweep_cmd->add_option("--snr-step", snr_step, "SNR step (dB)");
    sweep_cmd->add_option("--trials", trials, "trials per SNR point");
    sweep_cmd->add_option("--symbols", symbols, "OFDM symbols per trial");
    sweep_cmd->add_option("--seed", seed, "master seed");
    sweep_cmd->add_option("--early-stop", early_stop, "stop a point after this many errors per user (0 = never)");
    sweep_cmd->add_option("--csv", csv, "CSV output path (stdout if omitted)");
    sweep_cmd->add_option("--svg", svg, "SVG chart output path");

    app.add_subcommand("validate", "run the built-in property and calibration checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sweep_cmd->parsed()) {
            return run_sweep(config_path, scenario, scheme, *sweep_cmd, snr_start, snr_stop, snr_step, trials, symbols,
                             seed, early_stop, csv, svg);
        }
        return run_validate();
    } catch (const sdcma::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
