#include "gfdm/simulation.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "gfdm/errors.hpp"

namespace gfdm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
    }
    return bits;
}

ComplexVector active_entries(const ComplexMatrix& block, const GfdmParams& params) {
    ComplexVector out;
    out.reserve(params.active_count());
    for (auto m : params.active_subsymbols())
        for (auto k : params.active_subcarriers()) out.push_back(block(k, m));
    return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index_a, std::uint64_t index_b) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    h = splitmix64(h ^ index_a);
    return splitmix64(h ^ index_b);
}

// ---- mapping -------------------------------------------------------------------------

std::string_view to_string(Constellation c) { return c == Constellation::QPSK ? "QPSK" : "QAM16"; }

Constellation parse_constellation(std::string_view name) {
    if (name == "QPSK" || name == "qpsk") return Constellation::QPSK;
    if (name == "QAM16" || name == "qam16") return Constellation::QAM16;
    throw std::invalid_argument("unknown constellation '" + std::string(name) + "'");
}

std::size_t bits_per_symbol(Constellation c) { return c == Constellation::QPSK ? 2 : 4; }

ComplexVector map_bits(std::span<const std::uint8_t> bits, Constellation c) {
    const std::size_t bps = bits_per_symbol(c);
    if (bits.size() % bps != 0) {
        throw std::invalid_argument("map_bits: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                                    std::to_string(bps));
    }
    ComplexVector out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto* b = &bits[s * bps];
        const double si = 1.0 - 2.0 * (b[0] & 1U);
        const double sq = 1.0 - 2.0 * (b[1] & 1U);
        if (c == Constellation::QPSK) {
            out[s] = {si * kInvSqrt2, sq * kInvSqrt2};
        } else {
            const double ai = (b[2] & 1U) ? 3.0 : 1.0;
            const double aq = (b[3] & 1U) ? 3.0 : 1.0;
            out[s] = {si * ai * kInvSqrt10, sq * aq * kInvSqrt10};
        }
    }
    return out;
}

std::vector<std::uint8_t> demap_bits(std::span<const cplx> symbols, Constellation c) {
    const std::size_t bps = bits_per_symbol(c);
    std::vector<std::uint8_t> bits(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        auto* b = &bits[s * bps];
        b[0] = symbols[s].real() < 0.0 ? 1 : 0;
        b[1] = symbols[s].imag() < 0.0 ? 1 : 0;
        if (c == Constellation::QAM16) {
            const double threshold = 2.0 * kInvSqrt10;
            b[2] = std::abs(symbols[s].real()) > threshold ? 1 : 0;
            b[3] = std::abs(symbols[s].imag()) > threshold ? 1 : 0;
        }
    }
    return bits;
}

std::vector<std::uint32_t> decide_symbols(std::span<const cplx> symbols, Constellation c) {
    const std::size_t bps = bits_per_symbol(c);
    const auto bits = demap_bits(symbols, c);
    std::vector<std::uint32_t> out(symbols.size());
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < bps; ++i) v = (v << 1) | bits[s * bps + i];
        out[s] = v;
    }
    return out;
}

DataGrid map_symbols(std::span<const std::uint8_t> bits, Constellation c, const GfdmParams& params) {
    const std::size_t want = params.active_count() * bits_per_symbol(c);
    if (bits.size() != want) {
        throw std::invalid_argument("map_symbols: got " + std::to_string(bits.size()) + " bits, grid needs " +
                                    std::to_string(want));
    }
    const ComplexVector symbols = map_bits(bits, c);
    ComplexMatrix entries(params.K(), params.M());
    std::size_t i = 0;
    for (auto m : params.active_subsymbols())
        for (auto k : params.active_subcarriers()) entries(k, m) = symbols[i++];
    return DataGrid(params, std::move(entries));
}

std::vector<std::uint8_t> demap_symbols(const ComplexMatrix& estimate, Constellation c, const GfdmParams& params) {
    if (estimate.rows() != params.K() || estimate.cols() != params.M()) {
        throw std::invalid_argument("demap_symbols: estimate shape does not match params");
    }
    return demap_bits(active_entries(estimate, params), c);
}

// ---- CP and channel ----------------------------------------------------------------------

ComplexVector add_cp(std::span<const cplx> x, std::size_t cp_length) {
    if (cp_length >= x.size()) {
        throw std::invalid_argument("add_cp: cp_length " + std::to_string(cp_length) + " must be < N=" +
                                    std::to_string(x.size()));
    }
    ComplexVector out(x.end() - static_cast<std::ptrdiff_t>(cp_length), x.end());
    out.insert(out.end(), x.begin(), x.end());
    return out;
}

ComplexVector remove_cp(std::span<const cplx> y, std::size_t cp_length) {
    if (cp_length >= y.size()) throw std::invalid_argument("remove_cp: cp_length exceeds frame");
    return ComplexVector(y.begin() + static_cast<std::ptrdiff_t>(cp_length), y.end());
}

void ChannelConfig::validate(std::size_t block_length) const {
    if (impulse_response.empty()) throw std::invalid_argument("channel: impulse_response is empty");
    if (norm2(impulse_response) == 0.0) throw std::invalid_argument("channel: impulse_response is all zero");
    if (!all_finite(impulse_response)) throw std::invalid_argument("channel: impulse_response is not finite");
    if (cp_length >= block_length) {
        throw std::invalid_argument("channel: cp_length " + std::to_string(cp_length) + " must be < N=" +
                                    std::to_string(block_length));
    }
    if (cp_length + 1 < impulse_response.size()) {
        throw std::invalid_argument("channel: cp_length " + std::to_string(cp_length) + " shorter than channel memory " +
                                    std::to_string(impulse_response.size() - 1));
    }
    if (std::isnan(snr_db)) throw std::invalid_argument("channel: snr_db is NaN");
}

bool ChannelConfig::is_flat() const { return impulse_response.size() == 1 && impulse_response[0] == cplx{1.0, 0.0}; }

double noise_variance(double snr_db, double symbol_energy) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return symbol_energy / std::pow(10.0, snr_db / 10.0);
}

ComplexVector apply_channel(std::span<const cplx> x_cp, const ChannelConfig& cfg, double symbol_energy,
                            std::uint64_t stream_index) {
    const auto& h = cfg.impulse_response;
    ComplexVector y(x_cp.size(), cplx{});
    for (std::size_t n = 0; n < x_cp.size(); ++n) {
        cplx acc{};
        for (std::size_t l = 0; l < h.size() && l <= n; ++l) acc += h[l] * x_cp[n - l];
        y[n] = acc;
    }
    const double var = noise_variance(cfg.snr_db, symbol_energy);
    if (var > 0.0) {
        std::mt19937_64 rng(derive_seed(cfg.seed, StreamPurpose::noise, stream_index));
        std::normal_distribution<double> normal(0.0, std::sqrt(var / 2.0));
        for (auto& v : y) {
            const double re = normal(rng);
            const double im = normal(rng);
            v += cplx{re, im};
        }
    }
    return y;
}

std::string_view to_string(EqualizerMode mode) { return mode == EqualizerMode::ZF ? "ZF" : "MMSE"; }

EqualizerMode parse_equalizer_mode(std::string_view name) {
    if (name == "ZF") return EqualizerMode::ZF;
    if (name == "MMSE") return EqualizerMode::MMSE;
    throw std::invalid_argument("unknown equalizer mode '" + std::string(name) + "'");
}

ComplexVector fde(std::span<const cplx> y, const ChannelConfig& cfg, EqualizerMode mode, double noise_to_signal) {
    const std::size_t n = y.size();
    if (cfg.impulse_response.size() > n) throw std::invalid_argument("fde: channel longer than block");
    ComplexVector padded(n, cplx{});
    std::copy(cfg.impulse_response.begin(), cfg.impulse_response.end(), padded.begin());
    const ComplexVector H = dft(padded);
    ComplexVector Y = dft(y);
    for (std::size_t f = 0; f < n; ++f) {
        if (mode == EqualizerMode::ZF) {
            if (std::abs(H[f]) < 1e-12) {
                throw SpectralNullError("fde: channel has a spectral null at bin " + std::to_string(f), f);
            }
            Y[f] /= H[f];
        } else {
            Y[f] = Y[f] * std::conj(H[f]) / (std::norm(H[f]) + noise_to_signal);
        }
    }
    return idft(Y);
}

// ---- link simulation ---------------------------------------------------------------------

double mean_symbol_energy(const GfdmParams& params, const PrototypeFilter& g, const PrecodingScheme& scheme) {
    double total = 0.0;
    for (auto m : params.active_subsymbols()) {
        for (auto k : params.active_subcarriers()) {
            ComplexMatrix basis(params.K(), params.M());
            basis(k, m) = 1.0;
            const ComplexVector x = core_transmit(encode(basis, scheme), g);
            const double e = norm2(x);
            total += e * e;
        }
    }
    return total / static_cast<double>(params.active_count());
}

std::vector<LinkResult> run_ser(const LinkConfig& cfg) {
    const auto& params = cfg.params;
    if (cfg.filter.K != params.K() || cfg.filter.M != params.M()) {
        throw std::invalid_argument("run_ser: filter geometry does not match params");
    }
    if (cfg.max_frames == 0) throw std::invalid_argument("run_ser: max_frames must be >= 1");
    ChannelConfig channel{cfg.impulse_response, cfg.cp_length, 0.0, cfg.seed};
    channel.validate(params.N());

    const auto scheme = PrecodingScheme::preset(cfg.domain, params.K(), params.M());
    const double symbol_energy = mean_symbol_energy(params, cfg.filter, scheme);
    const double signal_power = symbol_energy * static_cast<double>(params.active_count()) /
                                static_cast<double>(params.N());
    const std::size_t nbits = params.active_count() * bits_per_symbol(cfg.constellation);

    std::optional<ReceiverFilter> fixed_rx;
    if (cfg.rx != ReceiverMode::MMSE) fixed_rx = make_receiver(cfg.filter, cfg.rx);

    std::vector<LinkResult> results;
    for (std::size_t point = 0; point < cfg.snr_db.size(); ++point) {
        const double snr = cfg.snr_db[point];
        channel.snr_db = snr;
        const double var = noise_variance(snr, symbol_energy);
        const ReceiverFilter rx = fixed_rx ? *fixed_rx
                                           : make_receiver(cfg.filter, ReceiverMode::MMSE, var / symbol_energy);

        LinkResult r;
        r.snr_db = snr;
        for (std::uint64_t frame = 0; frame < cfg.max_frames && r.symbol_errors < cfg.min_errors; ++frame) {
            std::mt19937_64 rng(derive_seed(cfg.seed, StreamPurpose::data, point, frame));
            const auto bits = random_bits(rng, nbits);
            const DataGrid grid = map_symbols(bits, cfg.constellation, params);
            const ComplexVector x = core_transmit(encode(grid.entries(), scheme), cfg.filter);
            const ComplexVector received =
                apply_channel(add_cp(x, cfg.cp_length), channel, symbol_energy, (std::uint64_t{point} << 40) | frame);
            ComplexVector y = remove_cp(received, cfg.cp_length);
            if (!channel.is_flat()) y = fde(y, channel, cfg.equalizer, var / signal_power);
            const ComplexMatrix estimate = decode(core_receive(y, rx), scheme);

            const auto sent = decide_symbols(active_entries(grid.entries(), params), cfg.constellation);
            const auto got = decide_symbols(active_entries(estimate, params), cfg.constellation);
            for (std::size_t i = 0; i < sent.size(); ++i) r.symbol_errors += sent[i] != got[i] ? 1 : 0;
            r.symbols_sent += sent.size();
            ++r.frames;
        }
        r.ser = static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols_sent);
        results.push_back(r);
    }
    return results;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double qpsk_ser_theory(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    const double q = q_function(std::sqrt(std::pow(10.0, snr_db / 10.0)));
    return 2.0 * q - q * q;
}

double qam16_ser_theory(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    const double q = q_function(std::sqrt(std::pow(10.0, snr_db / 10.0) / 5.0));
    const double p = 1.0 - 1.5 * q;
    return 1.0 - p * p;
}

double ser_theory(Constellation c, double snr_db) {
    return c == Constellation::QPSK ? qpsk_ser_theory(snr_db) : qam16_ser_theory(snr_db);
}

BlockGenerator gfdm_block_source(const GfdmParams& params, const PrototypeFilter& g, const PrecodingScheme& scheme,
                                 Constellation c, std::uint64_t seed) {
    if (g.K != params.K() || g.M != params.M()) throw std::invalid_argument("gfdm_block_source: filter geometry mismatch");
    return [params, g, scheme, c, seed](std::uint64_t index) {
        std::mt19937_64 rng(derive_seed(seed, StreamPurpose::blocks, index));
        const auto bits = random_bits(rng, params.active_count() * bits_per_symbol(c));
        const DataGrid grid = map_symbols(bits, c, params);
        return core_transmit(encode(grid.entries(), scheme), g);
    };
}

}  // namespace gfdm
