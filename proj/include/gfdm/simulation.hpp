#pragma once

// Link-level harness: mapping, cyclic prefix, channel, one-tap FDE, SER.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "gfdm/filters.hpp"
#include "gfdm/modem.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/precoding.hpp"

namespace gfdm {

// ---- randomness ----------------------------------------------------------------

/// Independent streams derived from one 64-bit seed. A stream is named by
/// (purpose, index_a, index_b) and mixed with splitmix64, so draws do not depend
/// on evaluation order.
enum class StreamPurpose : std::uint64_t { data = 1, noise = 2, blocks = 3 };
std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index_a, std::uint64_t index_b = 0);

// ---- symbol mapping ----------------------------------------------------------

enum class Constellation { QPSK, QAM16 };

std::string_view to_string(Constellation c);
Constellation parse_constellation(std::string_view name);
std::size_t bits_per_symbol(Constellation c);

/// Gray-mapped, unit average energy. QPSK: bit0 -> sign of I, bit1 -> sign of Q,
/// 0 -> positive, so 00 maps to (1+j)/sqrt(2).
ComplexVector map_bits(std::span<const std::uint8_t> bits, Constellation c);
/// Minimum-distance decision back to bits.
std::vector<std::uint8_t> demap_bits(std::span<const cplx> symbols, Constellation c);
/// Minimum-distance decision to symbol index (bits read MSB first).
std::vector<std::uint32_t> decide_symbols(std::span<const cplx> symbols, Constellation c);

/// Fills the active resources in vec order (k fastest). The bit count must equal
/// params.active_count() * bits_per_symbol(c).
DataGrid map_symbols(std::span<const std::uint8_t> bits, Constellation c, const GfdmParams& params);
std::vector<std::uint8_t> demap_symbols(const ComplexMatrix& estimate, Constellation c, const GfdmParams& params);

// ---- cyclic prefix and channel -------------------------------------------------------

ComplexVector add_cp(std::span<const cplx> x, std::size_t cp_length);
ComplexVector remove_cp(std::span<const cplx> y, std::size_t cp_length);

struct ChannelConfig {
    ComplexVector impulse_response{cplx{1.0, 0.0}};
    std::size_t cp_length = 0;
    /// Es/N0 per data symbol; +inf disables noise.
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when the CP cannot absorb the channel,
    /// cp_length >= N or the response is empty/all-zero.
    void validate(std::size_t block_length) const;
    bool is_flat() const;
};

/// Per-sample noise variance for the given SNR and energy per data symbol.
double noise_variance(double snr_db, double symbol_energy = 1.0);

/// Linear convolution with the impulse response (tail beyond the frame dropped)
/// plus circular Gaussian noise of variance symbol_energy / 10^(snr/10).
/// Deterministic in (cfg.seed, stream_index).
ComplexVector apply_channel(std::span<const cplx> x_cp, const ChannelConfig& cfg, double symbol_energy = 1.0,
                            std::uint64_t stream_index = 0);

enum class EqualizerMode { ZF, MMSE };
std::string_view to_string(EqualizerMode mode);
EqualizerMode parse_equalizer_mode(std::string_view name);

/// One-tap equalizer on the N-point spectrum. MMSE regularizes with
/// noise_to_signal (noise variance over per-sample signal power). ZF throws
/// SpectralNullError naming the first bin with |H| < 1e-12.
ComplexVector fde(std::span<const cplx> y, const ChannelConfig& cfg, EqualizerMode mode, double noise_to_signal = 0.0);

// ---- link simulation -------------------------------------------------------------

struct LinkConfig {
    GfdmParams params{1, 1};
    PrototypeFilter filter;
    Domain domain = Domain::FT;
    ReceiverMode rx = ReceiverMode::ZF;
    Constellation constellation = Constellation::QPSK;
    ComplexVector impulse_response{cplx{1.0, 0.0}};
    std::size_t cp_length = 0;
    EqualizerMode equalizer = EqualizerMode::ZF;
    std::vector<double> snr_db;
    std::uint64_t min_errors = 100;
    std::uint64_t max_frames = 1000;
    std::uint64_t seed = 1;
};

struct LinkResult {
    double snr_db = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t symbols_sent = 0;
    std::uint64_t frames = 0;
    double ser = 0.0;
};

/// Average energy per active data symbol at the core_transmit output for
/// i.i.d. unit-energy symbols: mean over active (k, m) of ||core_transmit(encode(e_km))||^2.
double mean_symbol_energy(const GfdmParams& params, const PrototypeFilter& g, const PrecodingScheme& scheme);

/// map -> encode -> core_transmit -> add_cp -> channel -> remove_cp -> fde ->
/// core_receive -> decode -> demap, per SNR point until min_errors symbol
/// errors or max_frames frames.
std::vector<LinkResult> run_ser(const LinkConfig& cfg);

/// Gaussian tail function.
double q_function(double x);
/// 2Q(sqrt(g)) - Q(sqrt(g))^2 with g the linear Es/N0.
double qpsk_ser_theory(double snr_db);
/// Square 16-QAM, 1 - (1 - 3/2 Q(sqrt(g/5)))^2.
double qam16_ser_theory(double snr_db);
double ser_theory(Constellation c, double snr_db);

// ---- block sources ---------------------------------------------------------------

/// Block index -> transmitted samples.
using BlockGenerator = std::function<ComplexVector(std::uint64_t)>;

/// Random-data GFDM blocks: map -> encode -> core_transmit, data drawn from the
/// `blocks` stream of `seed` at the block index.
BlockGenerator gfdm_block_source(const GfdmParams& params, const PrototypeFilter& g, const PrecodingScheme& scheme,
                                 Constellation c, std::uint64_t seed);

}  // namespace gfdm
