#include "gfdm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "gfdm/errors.hpp"

namespace gfdm {

std::string_view to_string(Implementation impl) {
    switch (impl) {
        case Implementation::proposed_td: return "proposed_td";
        case Implementation::reference_fd: return "reference_fd";
        case Implementation::ofdm: return "ofdm";
    }
    return "unknown";
}

Implementation parse_implementation(std::string_view name) {
    for (auto i : {Implementation::proposed_td, Implementation::reference_fd, Implementation::ofdm}) {
        if (to_string(i) == name) return i;
    }
    throw std::invalid_argument("unknown implementation '" + std::string(name) + "'");
}

ComplexityReport pipeline_mults(Implementation impl, Domain domain, std::size_t K, std::size_t M, std::size_t L,
                                std::size_t active_symbols) {
    if (K == 0 || M == 0) throw std::invalid_argument("pipeline_mults: K and M must be >= 1");
    if (L < 1 || L > K) {
        throw std::invalid_argument("pipeline_mults: L=" + std::to_string(L) + " outside [1, K=" + std::to_string(K) + "]");
    }
    ComplexityReport r;
    r.scheme = std::string(to_string(impl));
    r.domain = domain;
    r.K = K;
    r.M = M;
    r.N = K * M;
    r.L = L;
    r.active_symbols = active_symbols == 0 ? r.N : active_symbols;
    const std::uint64_t n = r.N;

    switch (impl) {
        case Implementation::proposed_td:
            r.core_mults = static_cast<std::uint64_t>(M) * n;
            r.precoding_mults = precoding_mults(domain, K, M);
            break;
        case Implementation::ofdm:
            r.core_mults = n * exact_log2(r.N);
            break;
        case Implementation::reference_fd:
            r.core_mults = n * exact_log2(r.N) + L * (n + static_cast<std::uint64_t>(M) * exact_log2(M));
            r.modelled = true;
            break;
    }
    r.total_mults = r.core_mults + r.precoding_mults;
    return r;
}

// ---- spectrum ---------------------------------------------------------------------

std::string_view to_string(Window w) { return w == Window::rect ? "rect" : "hann"; }

Window parse_window(std::string_view name) {
    if (name == "rect") return Window::rect;
    if (name == "hann") return Window::hann;
    throw std::invalid_argument("unknown window '" + std::string(name) + "'");
}

namespace {

double signed_frequency(std::size_t bin, std::size_t nfft) {
    const double f = static_cast<double>(bin) / static_cast<double>(nfft);
    return bin < (nfft + 1) / 2 ? f : f - 1.0;
}

void mark(std::vector<int>& owner, const std::vector<BinRange>& ranges, int id, const char* what) {
    for (const auto& r : ranges) {
        if (r.begin > r.end || r.end > owner.size()) throw std::invalid_argument(std::string("oob_db: bad ") + what + " range");
        for (std::size_t i = r.begin; i < r.end; ++i) {
            if (owner[i] != 0 && owner[i] != id) throw std::invalid_argument("oob_db: in-band and out-of-band ranges overlap");
            owner[i] = id;
        }
    }
}

double mean_power(const std::vector<double>& linear, const std::vector<BinRange>& ranges) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& r : ranges)
        for (std::size_t i = r.begin; i < r.end; ++i) {
            acc += linear[i];
            ++count;
        }
    return count ? acc / static_cast<double>(count) : 0.0;
}

}  // namespace

PsdEstimate psd_welch(const BlockGenerator& source, std::size_t nfft, std::size_t segments, Window window,
                      const std::vector<BinRange>& reference) {
    if (segments < 8) throw std::invalid_argument("psd_welch: need at least 8 segments, got " + std::to_string(segments));
    if (nfft == 0) throw std::invalid_argument("psd_welch: nfft must be >= 1");

    std::vector<double> accum(nfft, 0.0);
    ComplexVector buffer(nfft);
    std::vector<double> taper;
    for (std::size_t s = 0; s < segments; ++s) {
        const ComplexVector block = source(s);
        if (block.size() > nfft) {
            throw std::invalid_argument("psd_welch: block length " + std::to_string(block.size()) + " exceeds nfft " +
                                        std::to_string(nfft));
        }
        if (taper.size() != block.size()) {
            taper.assign(block.size(), 1.0);
            if (window == Window::hann) {
                for (std::size_t n = 0; n < block.size(); ++n) {
                    taper[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                                    static_cast<double>(block.size()));
                }
            }
        }
        std::fill(buffer.begin(), buffer.end(), cplx{});
        for (std::size_t n = 0; n < block.size(); ++n) buffer[n] = block[n] * taper[n];
        const ComplexVector spectrum = dft(buffer);
        for (std::size_t f = 0; f < nfft; ++f) accum[f] += std::norm(spectrum[f]);
    }

    std::vector<BinRange> ref = reference;
    if (ref.empty()) ref.push_back({0, nfft});
    std::vector<int> owner(nfft, 0);
    mark(owner, ref, 1, "reference");
    const double level = mean_power(accum, ref);
    if (!(level > 0.0)) throw std::invalid_argument("psd_welch: reference band carries no power");

    PsdEstimate psd;
    psd.nfft = nfft;
    psd.segments = segments;
    psd.bin_freqs.resize(nfft);
    psd.power_db.resize(nfft);
    for (std::size_t f = 0; f < nfft; ++f) {
        psd.bin_freqs[f] = signed_frequency(f, nfft);
        psd.power_db[f] = 10.0 * std::log10(std::max(accum[f] / level, 1e-30));
    }
    return psd;
}

std::vector<BinRange> frequency_bins(std::size_t nfft, double f_lo, double f_hi) {
    std::vector<BinRange> out;
    for (std::size_t i = 0; i < nfft; ++i) {
        const double f = signed_frequency(i, nfft);
        if (f < f_lo || f > f_hi) continue;
        if (!out.empty() && out.back().end == i) {
            ++out.back().end;
        } else {
            out.push_back({i, i + 1});
        }
    }
    return out;
}

double oob_db(const PsdEstimate& psd, const std::vector<BinRange>& inband, const std::vector<BinRange>& oob) {
    if (inband.empty() || oob.empty()) throw std::invalid_argument("oob_db: in-band and out-of-band regions must be nonempty");
    std::vector<int> owner(psd.power_db.size(), 0);
    mark(owner, inband, 1, "in-band");
    mark(owner, oob, 2, "out-of-band");
    std::vector<double> linear(psd.power_db.size());
    for (std::size_t i = 0; i < linear.size(); ++i) linear[i] = std::pow(10.0, psd.power_db[i] / 10.0);
    const double in = mean_power(linear, inband);
    const double out = mean_power(linear, oob);
    if (!(in > 0.0)) throw std::invalid_argument("oob_db: in-band region carries no power");
    if (out <= 0.0) return -200.0;
    return std::max(10.0 * std::log10(out / in), -200.0);
}

OobBands gfdm_oob_bands(const GfdmParams& params, std::size_t nfft) {
    const auto K = static_cast<long long>(params.K());
    long long lo = K, hi = -K;
    for (auto k : params.active_subcarriers()) {
        const auto kk = static_cast<long long>(k);
        const long long s = kk < (K + 1) / 2 ? kk : kk - K;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double width = 1.0 / static_cast<double>(K);
    OobBands bands;
    bands.inband_lo = (static_cast<double>(lo) - 0.5) * width;
    bands.inband_hi = (static_cast<double>(hi) + 0.5) * width;
    bands.oob_edge_lo = (static_cast<double>(lo) - 1.5) * width;
    bands.oob_edge_hi = (static_cast<double>(hi) + 1.5) * width;
    if (bands.oob_edge_lo <= -0.5 || bands.oob_edge_hi >= 0.5) {
        throw std::invalid_argument("gfdm_oob_bands: active subcarriers leave no out-of-band region");
    }
    bands.inband = frequency_bins(nfft, bands.inband_lo, bands.inband_hi);
    for (const auto& r : frequency_bins(nfft, -1.0, std::nextafter(bands.oob_edge_lo, -1.0))) bands.oob.push_back(r);
    for (const auto& r : frequency_bins(nfft, std::nextafter(bands.oob_edge_hi, 1.0), 1.0)) bands.oob.push_back(r);
    return bands;
}

// ---- PAPR ----------------------------------------------------------------------------------

double papr_db(std::span<const cplx> x) {
    if (x.empty()) throw std::invalid_argument("papr_db: empty signal");
    double peak = 0.0, sum = 0.0;
    for (const auto& v : x) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        sum += p;
    }
    if (sum == 0.0) throw std::invalid_argument("papr_db: all-zero signal");
    return 10.0 * std::log10(peak / (sum / static_cast<double>(x.size())));
}

std::vector<double> papr_samples(const BlockGenerator& source, std::size_t nblocks) {
    std::vector<double> out(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) out[b] = papr_db(source(b));
    return out;
}

PaprCcdf papr_ccdf(const BlockGenerator& source, std::size_t nblocks, const std::vector<double>& thresholds_db) {
    if (nblocks == 0) throw std::invalid_argument("papr_ccdf: nblocks must be >= 1");
    if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end())) {
        throw std::invalid_argument("papr_ccdf: thresholds must be ascending");
    }
    auto samples = papr_samples(source, nblocks);
    std::sort(samples.begin(), samples.end());
    PaprCcdf ccdf;
    ccdf.blocks = nblocks;
    ccdf.thresholds_db = thresholds_db;
    for (double t : thresholds_db) {
        const auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), t);
        ccdf.exceed_prob.push_back(static_cast<double>(above) / static_cast<double>(nblocks));
    }
    return ccdf;
}

double papr_at_probability(std::vector<double> samples, double prob) {
    if (samples.empty()) throw std::invalid_argument("papr_at_probability: no samples");
    if (!(prob >= 0.0 && prob < 1.0)) throw std::invalid_argument("papr_at_probability: prob must be in [0, 1)");
    std::sort(samples.begin(), samples.end(), std::greater<>());
    const auto allowed = static_cast<std::size_t>(std::floor(prob * static_cast<double>(samples.size())));
    return samples[std::min(allowed, samples.size() - 1)];
}

}  // namespace gfdm
