#include "gfdm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gfdm/analysis.hpp"
#include "gfdm/errors.hpp"
#include "gfdm/filters.hpp"
#include "gfdm/modem.hpp"
#include "gfdm/precoding.hpp"
#include "gfdm/simulation.hpp"

namespace gfdm::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kSeedScheme =
    "mt19937_64 streams seeded by splitmix64 chain over (seed, purpose, index_a, index_b); "
    "purpose data=1 (index snr point, frame), noise=2 (index snr_point<<40|frame), blocks=3 (index block)";

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}

double parse_real_token(std::string_view token, const char* field) {
    std::string t(token);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(field) + ": cannot parse '" + t + "' as a number");
    }
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_snr_list(std::string_view s) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_real_token(t, "snr"));
    return out;
}

ComplexVector parse_channel(std::string_view s) {
    ComplexVector out;
    for (const auto& t : split(s, ',')) {
        const auto parts = split(t, ':');
        if (parts.size() > 2) throw ConfigError("channel: tap '" + t + "' must be 're' or 're:im'");
        const double re = parse_real_token(parts[0], "channel");
        const double im = parts.size() == 2 ? parse_real_token(parts[1], "channel") : 0.0;
        out.emplace_back(re, im);
    }
    return out;
}

template <class T>
T get_field(const json& j, const char* name) {
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    }
}

double json_real(const json& v, const char* field) {
    if (v.is_string()) return parse_real_token(v.get<std::string>(), field);
    if (!v.is_number()) throw ConfigError(std::string(field) + ": expected a number");
    return v.get<double>();
}

GfdmParams make_params(const ExperimentConfig& cfg) {
    return GfdmParams::with_active_counts(cfg.K, cfg.M, cfg.Kon.value_or(cfg.K), cfg.Mon.value_or(cfg.M));
}

PrototypeFilter make_filter(const ExperimentConfig& cfg) {
    return make_prototype(parse_filter_kind(cfg.filter), cfg.K, cfg.M, cfg.rolloff);
}

Domain run_domain(const ExperimentConfig& cfg) { return parse_domain(cfg.domain.value_or("FT")); }

std::size_t effective_nfft(const ExperimentConfig& cfg) { return cfg.nfft ? cfg.nfft : 4 * cfg.K * cfg.M; }

void write_header(std::ostream& out, const ExperimentConfig& cfg) { out << "#JSON:" << metadata(cfg).dump() << '\n'; }

// ---- commands --------------------------------------------------------------------

double max_of(double a, double b) { return std::isnan(b) ? b : std::max(a, b); }

int cmd_roundtrip(const ExperimentConfig& cfg, std::ostream& out) {
    const GfdmParams params = make_params(cfg);
    const PrototypeFilter g = make_filter(cfg);
    const Domain domain = run_domain(cfg);
    const PrecodingScheme scheme = PrecodingScheme::preset(domain, cfg.K, cfg.M);
    const ModulationMatrix a = build_mod_matrix(g);
    const double cond = modulation_condition_number(cfg.K, cfg.M, g.taps);
    const bool invertible = cond < kMaxConditionNumber;

    ReceiverMode mode = parse_receiver_mode(cfg.rx);
    if (mode != ReceiverMode::MF && !invertible) mode = ReceiverMode::MF;
    const ReceiverFilter gamma = make_receiver(g, mode, 0.0);
    std::optional<ReceiverFilter> zf;
    if (invertible) zf = mode == ReceiverMode::ZF ? gamma : make_receiver(g, ReceiverMode::ZF);

    double mod_ref_fd = 0, mod_ref_td = 0, mod_fd_td = 0;
    double dem_ref_fd = 0, dem_ref_td = 0, dem_fd_td = 0;
    double zf_core = 0, zf_td = 0;
    const std::size_t nblocks = std::min<std::size_t>(cfg.blocks, 3);
    const std::size_t nbits = params.active_count() * bits_per_symbol(parse_constellation(cfg.constellation));
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::mt19937_64 rng(derive_seed(cfg.seed, StreamPurpose::data, 0, b));
        std::vector<std::uint8_t> bits(nbits);
        for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng() & 1U);
        const DataGrid grid = map_symbols(bits, parse_constellation(cfg.constellation), params);

        const auto x_ref = modulate_ref(grid, a);
        const auto x_fd = modulate_fd(grid, g);
        const auto x_td = modulate_td(grid, g);
        mod_ref_fd = max_of(mod_ref_fd, relative_error(x_fd, x_ref));
        mod_ref_td = max_of(mod_ref_td, relative_error(x_td, x_ref));
        mod_fd_td = max_of(mod_fd_td, relative_error(x_td, x_fd));

        const auto d_ref = vec(demodulate_ref(x_ref, gamma));
        const auto d_fd = vec(demodulate_fd(x_ref, gamma));
        const auto d_td = vec(demodulate_td(x_ref, gamma));
        dem_ref_fd = max_of(dem_ref_fd, relative_error(d_fd, d_ref));
        dem_ref_td = max_of(dem_ref_td, relative_error(d_td, d_ref));
        dem_fd_td = max_of(dem_fd_td, relative_error(d_td, d_fd));

        if (zf) {
            const auto sent = vec(grid.entries());
            const auto x = core_transmit(encode(grid.entries(), scheme), g);
            zf_core = max_of(zf_core, max_abs_diff(vec(decode(core_receive(x, *zf), scheme)), sent));
            zf_td = max_of(zf_td, max_abs_diff(vec(demodulate_td(x_td, *zf)), sent));
        }
    }

    const double worst = std::max({mod_ref_fd, mod_ref_td, mod_fd_td, dem_ref_fd, dem_ref_td, dem_fd_td, zf_core, zf_td});
    const bool pass = worst < kRoundtripTolerance;

    json report;
    report["metadata"] = metadata(cfg);
    report["condition_number"] = number_or_inf(cond);
    report["blocks"] = nblocks;
    report["modulator"] = {{"ref_vs_fd", mod_ref_fd}, {"ref_vs_td", mod_ref_td}, {"fd_vs_td", mod_fd_td}};
    report["demodulator"] = {{"receiver", std::string(to_string(mode))},
                             {"ref_vs_fd", dem_ref_fd},
                             {"ref_vs_td", dem_ref_td},
                             {"fd_vs_td", dem_fd_td}};
    if (zf) {
        report["zf_roundtrip"] = {{"status", "checked"},
                                  {"domain", std::string(to_string(domain))},
                                  {"core_max_abs_error", zf_core},
                                  {"td_max_abs_error", zf_td}};
    } else {
        report["zf_roundtrip"] = {{"status", "skipped"},
                                  {"reason", "modulation matrix condition number >= 1e10"}};
    }
    report["tolerance"] = kRoundtripTolerance;
    report["pass"] = pass;
    out << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

int cmd_complexity(const ExperimentConfig& cfg, std::ostream& out) {
    const GfdmParams params = make_params(cfg);
    std::vector<ComplexityReport> rows;
    const bool all = cfg.impl == "all";
    if (all || cfg.impl == "proposed_td") {
        if (cfg.domain) {
            rows.push_back(pipeline_mults(Implementation::proposed_td, parse_domain(*cfg.domain), cfg.K, cfg.M, cfg.L,
                                          params.active_count()));
        } else {
            for (auto d : {Domain::FT, Domain::TT, Domain::FF, Domain::TF})
                rows.push_back(pipeline_mults(Implementation::proposed_td, d, cfg.K, cfg.M, cfg.L, params.active_count()));
        }
    }
    if (all || cfg.impl == "reference_fd")
        rows.push_back(pipeline_mults(Implementation::reference_fd, Domain::FT, cfg.K, cfg.M, cfg.L, params.active_count()));
    if (all || cfg.impl == "ofdm")
        rows.push_back(pipeline_mults(Implementation::ofdm, Domain::TT, cfg.K, cfg.M, cfg.L, params.active_count()));

    write_header(out, cfg);
    out << "scheme,domain,K,M,L,core,precoding,total,active_symbols,total_per_symbol\n";
    for (const auto& r : rows) {
        const std::string_view domain = r.scheme == "proposed_td" ? to_string(r.domain) : std::string_view("-");
        out << r.scheme << ',' << domain << ',' << r.K << ',' << r.M << ',' << r.L << ',' << r.core_mults << ','
            << r.precoding_mults << ',' << r.total_mults << ',' << r.active_symbols << ','
            << format_double(r.total_per_symbol()) << '\n';
    }
    out << "#SUMMARY:" << json{{"reference_fd_is_model", true}}.dump() << '\n';
    return 0;
}

int cmd_ser(const ExperimentConfig& cfg, std::ostream& out) {
    LinkConfig link;
    link.params = make_params(cfg);
    link.filter = make_filter(cfg);
    link.domain = run_domain(cfg);
    link.rx = parse_receiver_mode(cfg.rx);
    link.constellation = parse_constellation(cfg.constellation);
    link.impulse_response = cfg.channel;
    link.cp_length = cfg.cp;
    link.equalizer = parse_equalizer_mode(cfg.equalizer);
    link.snr_db = cfg.snr_db;
    link.min_errors = cfg.min_errors;
    link.max_frames = cfg.frames;
    link.seed = cfg.seed;
    const auto results = run_ser(link);

    write_header(out, cfg);
    out << "snr_db,errors,sent,ser,theory_ser\n";
    for (const auto& r : results) {
        out << format_double(r.snr_db) << ',' << r.symbol_errors << ',' << r.symbols_sent << ','
            << format_double(r.ser) << ',' << format_double(ser_theory(link.constellation, r.snr_db)) << '\n';
    }
    return 0;
}

int cmd_oob(const ExperimentConfig& cfg, std::ostream& out) {
    const GfdmParams params = make_params(cfg);
    const PrototypeFilter g = make_filter(cfg);
    const auto scheme = PrecodingScheme::preset(run_domain(cfg), cfg.K, cfg.M);
    const std::size_t nfft = effective_nfft(cfg);
    const OobBands bands = gfdm_oob_bands(params, nfft);
    const auto source = gfdm_block_source(params, g, scheme, parse_constellation(cfg.constellation), cfg.seed);
    const PsdEstimate psd = psd_welch(source, nfft, cfg.segments, parse_window(cfg.window), bands.inband);
    const double oob = oob_db(psd, bands.inband, bands.oob);

    write_header(out, cfg);
    out << "bin,norm_freq,power_db\n";
    for (std::size_t i = 0; i < nfft; ++i)
        out << i << ',' << format_double(psd.bin_freqs[i]) << ',' << format_double(psd.power_db[i]) << '\n';
    out << "#SUMMARY:"
        << json{{"oob_db", oob},
                {"inband", {bands.inband_lo, bands.inband_hi}},
                {"oob_beyond", {bands.oob_edge_lo, bands.oob_edge_hi}},
                {"nfft", nfft}}
               .dump()
        << '\n';
    return 0;
}

int cmd_papr(const ExperimentConfig& cfg, std::ostream& out) {
    const GfdmParams params = make_params(cfg);
    const PrototypeFilter g = make_filter(cfg);
    const auto scheme = PrecodingScheme::preset(run_domain(cfg), cfg.K, cfg.M);
    const auto source = gfdm_block_source(params, g, scheme, parse_constellation(cfg.constellation), cfg.seed);
    std::vector<double> thresholds;
    const auto steps = static_cast<std::size_t>(std::floor((cfg.papr_max_db - cfg.papr_min_db) / cfg.papr_step_db + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) thresholds.push_back(cfg.papr_min_db + static_cast<double>(i) * cfg.papr_step_db);

    const auto samples = papr_samples(source, cfg.blocks);
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());

    write_header(out, cfg);
    out << "threshold_db,ccdf\n";
    for (double t : thresholds) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        out << format_double(t) << ',' << format_double(static_cast<double>(above) / static_cast<double>(cfg.blocks)) << '\n';
    }
    out << "#SUMMARY:" << json{{"papr_db_at_1e-2", papr_at_probability(samples, 1e-2)}, {"blocks", cfg.blocks}}.dump()
        << '\n';
    return 0;
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::roundtrip: return "roundtrip";
        case Command::complexity: return "complexity";
        case Command::ser: return "ser";
        case Command::oob: return "oob";
        case Command::papr: return "papr";
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (auto c : {Command::roundtrip, Command::complexity, Command::ser, Command::oob, Command::papr}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
    if (cfg.K < 1) fail("K", "must be >= 1");
    if (cfg.M < 1) fail("M", "must be >= 1");
    if (cfg.Kon && (*cfg.Kon < 1 || *cfg.Kon > cfg.K)) fail("Kon", "must be in [1, K]");
    if (cfg.Mon && (*cfg.Mon < 1 || *cfg.Mon > cfg.M)) fail("Mon", "must be in [1, M]");
    if (!(cfg.rolloff >= 0.0 && cfg.rolloff <= 1.0)) fail("rolloff", format_double(cfg.rolloff) + " outside [0, 1]");

    auto check_enum = [&](const char* field, auto&& parser, const std::string& value) {
        try {
            parser(value);
        } catch (const std::invalid_argument& e) {
            fail(field, e.what());
        }
    };
    check_enum("filter", parse_filter_kind, cfg.filter);
    check_enum("rx", parse_receiver_mode, cfg.rx);
    check_enum("constellation", parse_constellation, cfg.constellation);
    check_enum("equalizer", parse_equalizer_mode, cfg.equalizer);
    check_enum("window", parse_window, cfg.window);
    if (cfg.domain) {
        check_enum("domain", parse_domain, *cfg.domain);
        if (*cfg.domain == "custom") fail("domain", "custom schemes are library-only");
    }
    if (cfg.impl != "all") check_enum("impl", parse_implementation, cfg.impl);

    if (cfg.command == Command::complexity && (cfg.L < 1 || cfg.L > cfg.K)) fail("L", "must be in [1, K]");
    if (cfg.snr_db.empty()) fail("snr", "needs at least one value");
    for (double s : cfg.snr_db)
        if (std::isnan(s) || (std::isinf(s) && s < 0)) fail("snr", "values must be finite or +inf");
    if (cfg.frames < 1) fail("frames", "must be >= 1");
    if (cfg.min_errors < 1) fail("min_errors", "must be >= 1");
    if (cfg.channel.empty()) fail("channel", "needs at least one tap");
    if (!all_finite(cfg.channel) || norm2(cfg.channel) == 0.0) fail("channel", "taps must be finite and not all zero");
    const std::size_t n = cfg.K * cfg.M;
    if (cfg.cp >= n) fail("cp", "must be < N = K*M");
    if (cfg.cp + 1 < cfg.channel.size()) fail("cp", "must be >= channel length - 1");
    if (cfg.nfft != 0 && cfg.nfft < n) fail("nfft", "must be >= N = K*M (or 0 for 4N)");
    if (cfg.segments < 8) fail("segments", "must be >= 8");
    if (cfg.blocks < 1) fail("blocks", "must be >= 1");
    if (!(cfg.papr_step_db > 0.0)) fail("papr_step_db", "must be > 0");
    if (!(cfg.papr_max_db >= cfg.papr_min_db)) fail("papr_max_db", "must be >= papr_min_db");
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["command"] = std::string(to_string(cfg.command));
    j["K"] = cfg.K;
    j["M"] = cfg.M;
    if (cfg.Kon) j["Kon"] = *cfg.Kon;
    if (cfg.Mon) j["Mon"] = *cfg.Mon;
    j["filter"] = cfg.filter;
    j["rolloff"] = cfg.rolloff;
    if (cfg.domain) j["domain"] = *cfg.domain;
    j["rx"] = cfg.rx;
    j["constellation"] = cfg.constellation;
    j["snr"] = json::array();
    for (double s : cfg.snr_db) j["snr"].push_back(number_or_inf(s));
    j["frames"] = cfg.frames;
    j["min_errors"] = cfg.min_errors;
    j["channel"] = json::array();
    for (const auto& h : cfg.channel) j["channel"].push_back({h.real(), h.imag()});
    j["cp"] = cfg.cp;
    j["equalizer"] = cfg.equalizer;
    j["L"] = cfg.L;
    j["impl"] = cfg.impl;
    j["nfft"] = cfg.nfft;
    j["segments"] = cfg.segments;
    j["window"] = cfg.window;
    j["blocks"] = cfg.blocks;
    j["papr_min_db"] = cfg.papr_min_db;
    j["papr_max_db"] = cfg.papr_max_db;
    j["papr_step_db"] = cfg.papr_step_db;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    return j;
}

ExperimentConfig from_json(const json& j, ExperimentConfig base) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig cfg = std::move(base);
    using Setter = std::function<void(const json&)>;
    const std::vector<std::pair<std::string, Setter>> fields = {
        {"command", [&](const json&) { cfg.command = parse_command(get_field<std::string>(j, "command")); }},
        {"K", [&](const json&) { cfg.K = get_field<std::size_t>(j, "K"); }},
        {"M", [&](const json&) { cfg.M = get_field<std::size_t>(j, "M"); }},
        {"Kon", [&](const json&) { cfg.Kon = get_field<std::size_t>(j, "Kon"); }},
        {"Mon", [&](const json&) { cfg.Mon = get_field<std::size_t>(j, "Mon"); }},
        {"filter", [&](const json&) { cfg.filter = get_field<std::string>(j, "filter"); }},
        {"rolloff", [&](const json& v) { cfg.rolloff = json_real(v, "rolloff"); }},
        {"domain", [&](const json&) { cfg.domain = get_field<std::string>(j, "domain"); }},
        {"rx", [&](const json&) { cfg.rx = get_field<std::string>(j, "rx"); }},
        {"constellation", [&](const json&) { cfg.constellation = get_field<std::string>(j, "constellation"); }},
        {"snr",
         [&](const json& v) {
             if (!v.is_array()) throw ConfigError("snr: expected an array");
             cfg.snr_db.clear();
             for (const auto& s : v) cfg.snr_db.push_back(json_real(s, "snr"));
         }},
        {"frames", [&](const json&) { cfg.frames = get_field<std::uint64_t>(j, "frames"); }},
        {"min_errors", [&](const json&) { cfg.min_errors = get_field<std::uint64_t>(j, "min_errors"); }},
        {"channel",
         [&](const json& v) {
             if (!v.is_array()) throw ConfigError("channel: expected an array");
             cfg.channel.clear();
             for (const auto& t : v) {
                 if (t.is_array() && t.size() == 2) {
                     cfg.channel.emplace_back(json_real(t[0], "channel"), json_real(t[1], "channel"));
                 } else {
                     cfg.channel.emplace_back(json_real(t, "channel"), 0.0);
                 }
             }
         }},
        {"cp", [&](const json&) { cfg.cp = get_field<std::size_t>(j, "cp"); }},
        {"equalizer", [&](const json&) { cfg.equalizer = get_field<std::string>(j, "equalizer"); }},
        {"L", [&](const json&) { cfg.L = get_field<std::size_t>(j, "L"); }},
        {"impl", [&](const json&) { cfg.impl = get_field<std::string>(j, "impl"); }},
        {"nfft", [&](const json&) { cfg.nfft = get_field<std::size_t>(j, "nfft"); }},
        {"segments", [&](const json&) { cfg.segments = get_field<std::size_t>(j, "segments"); }},
        {"window", [&](const json&) { cfg.window = get_field<std::string>(j, "window"); }},
        {"blocks", [&](const json&) { cfg.blocks = get_field<std::size_t>(j, "blocks"); }},
        {"papr_min_db", [&](const json& v) { cfg.papr_min_db = json_real(v, "papr_min_db"); }},
        {"papr_max_db", [&](const json& v) { cfg.papr_max_db = json_real(v, "papr_max_db"); }},
        {"papr_step_db", [&](const json& v) { cfg.papr_step_db = json_real(v, "papr_step_db"); }},
        {"seed", [&](const json&) { cfg.seed = get_field<std::uint64_t>(j, "seed"); }},
        {"out", [&](const json&) { cfg.out = get_field<std::string>(j, "out"); }},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
        if (it == fields.end()) throw ConfigError("config: unknown field '" + key + "'");
        it->second(value);
    }
    return cfg;
}

json metadata(const ExperimentConfig& cfg) {
    // The output location is not part of the experiment; leaving it out keeps
    // files from identical runs byte-identical wherever they are written.
    json config = to_json(cfg);
    config.erase("out");
    return json{{"command", std::string(to_string(cfg.command))},
                {"config", config},
                {"version", std::string(kVersion)},
                {"seed", cfg.seed},
                {"seed_scheme", std::string(kSeedScheme)},
                {"snr_reference", "Es/N0 per active data symbol, unit-energy constellation and prototype filter"},
                {"oob_bands", "in-band = active subcarrier span; out-of-band = beyond one guard subcarrier each side"}};
}

ExperimentConfig config_from_header(std::string_view header_line) {
    constexpr std::string_view prefix = "#JSON:";
    if (header_line.substr(0, prefix.size()) != prefix) throw ConfigError("header: missing #JSON: prefix");
    json meta;
    try {
        meta = json::parse(header_line.substr(prefix.size()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("header: ") + e.what());
    }
    if (!meta.contains("config")) throw ConfigError("header: no config object");
    return from_json(meta["config"]);
}

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        make_params(cfg);
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    }
    try {
        switch (cfg.command) {
            case Command::roundtrip: return cmd_roundtrip(cfg, out);
            case Command::complexity: return cmd_complexity(cfg, out);
            case Command::ser: return cmd_ser(cfg, out);
            case Command::oob: return cmd_oob(cfg, out);
            case Command::papr: return cmd_papr(cfg, out);
        }
    } catch (const UnsupportedSizeError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return 1;
    }
    return 1;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"GFDM modem experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its fields");

    using Apply = std::function<void(ExperimentConfig&)>;
    std::vector<std::pair<CLI::Option*, Apply>> overrides;
    auto holder = std::make_shared<std::map<std::string, std::string>>();
    auto flag = [&](const std::string& name, const std::string& help, Apply apply) {
        overrides.emplace_back(app.add_option(name, (*holder)[name], help), std::move(apply));
    };
    auto value = [holder](const std::string& name) { return (*holder)[name]; };
    auto as_size = [](const std::string& field, const std::string& v) {
        try {
            std::size_t used = 0;
            const auto parsed = std::stoull(v, &used);
            if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
            return static_cast<std::size_t>(parsed);
        } catch (const std::exception&) {
            throw ConfigError(field + ": cannot parse '" + v + "' as a non-negative integer");
        }
    };

    flag("--K", "subcarriers", [&](ExperimentConfig& c) { c.K = as_size("K", value("--K")); });
    flag("--M", "subsymbols", [&](ExperimentConfig& c) { c.M = as_size("M", value("--M")); });
    flag("--Kon", "active subcarriers (centred on DC)", [&](ExperimentConfig& c) { c.Kon = as_size("Kon", value("--Kon")); });
    flag("--Mon", "active subsymbols (leading guard)", [&](ExperimentConfig& c) { c.Mon = as_size("Mon", value("--Mon")); });
    flag("--filter", "rc_time|rrc_time|rect_td|dirichlet", [&](ExperimentConfig& c) { c.filter = value("--filter"); });
    flag("--rolloff", "roll-off in [0,1]", [&](ExperimentConfig& c) { c.rolloff = parse_real_token(value("--rolloff"), "rolloff"); });
    flag("--domain", "FT|TT|FF|TF", [&](ExperimentConfig& c) { c.domain = value("--domain"); });
    flag("--rx", "MF|ZF|MMSE", [&](ExperimentConfig& c) { c.rx = value("--rx"); });
    flag("--snr", "comma-separated Es/N0 list in dB ('inf' allowed)", [&](ExperimentConfig& c) { c.snr_db = parse_snr_list(value("--snr")); });
    flag("--frames", "max frames per SNR point", [&](ExperimentConfig& c) { c.frames = as_size("frames", value("--frames")); });
    flag("--min-errors", "symbol errors to stop an SNR point", [&](ExperimentConfig& c) { c.min_errors = as_size("min_errors", value("--min-errors")); });
    flag("--seed", "64-bit seed", [&](ExperimentConfig& c) { c.seed = as_size("seed", value("--seed")); });
    flag("--out", "output file (default stdout)", [&](ExperimentConfig& c) { c.out = value("--out"); });
    flag("--L", "filter span in subcarriers for the reference_fd model", [&](ExperimentConfig& c) { c.L = as_size("L", value("--L")); });
    flag("--impl", "all|proposed_td|reference_fd|ofdm", [&](ExperimentConfig& c) { c.impl = value("--impl"); });
    flag("--constellation", "QPSK|QAM16", [&](ExperimentConfig& c) { c.constellation = value("--constellation"); });
    flag("--channel", "comma-separated taps, each 're' or 're:im'", [&](ExperimentConfig& c) { c.channel = parse_channel(value("--channel")); });
    flag("--cp", "cyclic prefix length", [&](ExperimentConfig& c) { c.cp = as_size("cp", value("--cp")); });
    flag("--equalizer", "ZF|MMSE frequency-domain equalizer", [&](ExperimentConfig& c) { c.equalizer = value("--equalizer"); });
    flag("--nfft", "PSD length (0: 4N)", [&](ExperimentConfig& c) { c.nfft = as_size("nfft", value("--nfft")); });
    flag("--segments", "PSD blocks averaged", [&](ExperimentConfig& c) { c.segments = as_size("segments", value("--segments")); });
    flag("--window", "rect|hann", [&](ExperimentConfig& c) { c.window = value("--window"); });
    flag("--blocks", "PAPR blocks", [&](ExperimentConfig& c) { c.blocks = as_size("blocks", value("--blocks")); });

    std::vector<CLI::App*> subcommands;
    for (auto c : {Command::roundtrip, Command::complexity, Command::ser, Command::oob, Command::papr}) {
        subcommands.push_back(app.add_subcommand(std::string(to_string(c))));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            cfg = from_json(j);
        }
        for (auto* sub : subcommands)
            if (sub->parsed()) cfg.command = parse_command(sub->get_name());
        for (auto& [opt, apply] : overrides)
            if (opt->count() > 0) apply(cfg);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    }

    if (cfg.out.empty()) return run(cfg, out, err);
    std::ostringstream body;
    const int code = run(cfg, body, err);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        err << "cannot write '" << cfg.out << "'\n";
        return 1;
    }
    file << body.str();
    return code;
}

}  // namespace gfdm::cli
