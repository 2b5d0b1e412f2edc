#pragma once

// Complexity accounting, PSD / out-of-band power, PAPR statistics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfdm/modem.hpp"
#include "gfdm/precoding.hpp"
#include "gfdm/simulation.hpp"

namespace gfdm {

// ---- complexity ----------------------------------------------------------------

enum class Implementation { proposed_td, reference_fd, ofdm };

std::string_view to_string(Implementation impl);
Implementation parse_implementation(std::string_view name);

/// Complex multiplications per block. An n-point DFT costs n*log2(n).
///   proposed_td   core M*N (one length-N product per subsymbol) + precoding stage
///   ofdm          N*log2(N)
///   reference_fd  N*log2(N) + L*(N + M*log2(M)); a cost *model* of the
///                 frequency-domain modem with an L-subcarrier filter span,
///                 flagged by `modelled`.
struct ComplexityReport {
    std::string scheme;
    Domain domain = Domain::FT;
    std::size_t K = 0;
    std::size_t M = 0;
    std::size_t N = 0;
    std::size_t L = 0;
    std::uint64_t core_mults = 0;
    std::uint64_t precoding_mults = 0;
    std::uint64_t total_mults = 0;
    std::size_t active_symbols = 0;
    bool modelled = false;

    double total_per_symbol() const { return static_cast<double>(total_mults) / static_cast<double>(active_symbols); }
};

/// Throws UnsupportedSizeError for non power-of-two lengths in a log2 term and
/// std::invalid_argument for L outside [1, K]. active_symbols = 0 means N.
ComplexityReport pipeline_mults(Implementation impl, Domain domain, std::size_t K, std::size_t M, std::size_t L,
                                std::size_t active_symbols = 0);

// ---- spectrum -------------------------------------------------------------------

enum class Window { rect, hann };
std::string_view to_string(Window w);
Window parse_window(std::string_view name);

/// Half-open range of FFT bin indices.
struct BinRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct PsdEstimate {
    std::vector<double> bin_freqs;  // signed normalized frequency, cycles/sample
    std::vector<double> power_db;
    std::size_t nfft = 0;
    std::size_t segments = 0;
};

/// Averaged windowed periodogram over `segments` generated blocks, each
/// zero-padded to nfft. Power is in dB relative to the mean linear power over
/// `reference` (all bins when empty). Throws for segments < 8 or a block longer
/// than nfft.
PsdEstimate psd_welch(const BlockGenerator& source, std::size_t nfft, std::size_t segments, Window window,
                      const std::vector<BinRange>& reference = {});

/// Bins whose signed normalized frequency lies in [f_lo, f_hi].
std::vector<BinRange> frequency_bins(std::size_t nfft, double f_lo, double f_hi);

/// 10 log10(mean oob power / mean in-band power); -200 dB when the oob region
/// carries no power. Throws on empty or overlapping regions.
double oob_db(const PsdEstimate& psd, const std::vector<BinRange>& inband, const std::vector<BinRange>& oob);

/// In-band = active subcarrier span; out-of-band = everything beyond one guard
/// subcarrier on each side of it.
struct OobBands {
    std::vector<BinRange> inband;
    std::vector<BinRange> oob;
    double inband_lo = 0.0;
    double inband_hi = 0.0;
    double oob_edge_lo = 0.0;
    double oob_edge_hi = 0.0;
};
OobBands gfdm_oob_bands(const GfdmParams& params, std::size_t nfft);

// ---- PAPR --------------------------------------------------------------------------

/// 10 log10(max |x|^2 / mean |x|^2). Throws for an all-zero signal.
double papr_db(std::span<const cplx> x);

struct PaprCcdf {
    std::vector<double> thresholds_db;
    std::vector<double> exceed_prob;
    std::size_t blocks = 0;
};

/// Fraction of blocks whose PAPR exceeds each threshold. Thresholds must ascend.
PaprCcdf papr_ccdf(const BlockGenerator& source, std::size_t nblocks, const std::vector<double>& thresholds_db);

/// PAPR values of `nblocks` generated blocks.
std::vector<double> papr_samples(const BlockGenerator& source, std::size_t nblocks);

/// Empirical (1 - prob) quantile of PAPR: the smallest threshold t with
/// P(PAPR > t) <= prob.
double papr_at_probability(std::vector<double> samples, double prob);

}  // namespace gfdm
