#include "gfdm/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gfdm/precoding.hpp"

namespace gfdm {

namespace {

std::vector<std::size_t> full_range(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
}

std::vector<bool> make_mask(const std::vector<std::size_t>& indices, std::size_t n, const char* what) {
    std::vector<bool> mask(n, false);
    for (auto i : indices) {
        if (i >= n) throw std::invalid_argument(std::string("GfdmParams: ") + what + " index " + std::to_string(i) + " out of range");
        if (mask[i]) throw std::invalid_argument(std::string("GfdmParams: duplicate ") + what + " index " + std::to_string(i));
        mask[i] = true;
    }
    return mask;
}

void require_length(std::size_t got, std::size_t want, const char* who) {
    if (got != want) {
        throw std::invalid_argument(std::string(who) + ": expected length " + std::to_string(want) + ", got " +
                                    std::to_string(got));
    }
}

void require_shape(const ComplexMatrix& block, std::size_t K, std::size_t M, const char* who) {
    if (block.rows() != K || block.cols() != M) {
        throw std::invalid_argument(std::string(who) + ": block is " + std::to_string(block.rows()) + "x" +
                                    std::to_string(block.cols()) + ", expected " + std::to_string(K) + "x" +
                                    std::to_string(M));
    }
}

cplx subcarrier_phase(std::size_t k, std::size_t n, std::size_t K) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((k * n) % K) / static_cast<double>(K));
}

// Textbook product; skips the inf/nan recovery of operator* on std::complex.
inline cplx product(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

struct PlainMul {
    cplx operator()(cplx a, cplx b) const { return product(a, b); }
};

struct CountingMul {
    std::uint64_t* count;
    cplx operator()(cplx a, cplx b) const {
        ++*count;
        return product(a, b);
    }
};

template <class Mul>
ComplexVector transmit_kernel(const ComplexMatrix& coefficients, const PrototypeFilter& g, Mul mul) {
    const std::size_t K = g.K, M = g.M, N = g.N();
    require_length(g.taps.size(), N, "core_transmit");
    require_shape(coefficients, K, M, "core_transmit");
    ComplexVector x(N, cplx{});
    for (std::size_t m = 0; m < M; ++m) {
        const ComplexVector delta = coefficients.column(m);
        // x[n + mK] += g[n] * delta_m[n mod K], walked one K-block at a time
        for (std::size_t q = 0; q < M; ++q) {
            const cplx* src = g.taps.data() + q * K;
            cplx* dst = x.data() + ((q + m) % M) * K;
            for (std::size_t r = 0; r < K; ++r) dst[r] += mul(src[r], delta[r]);
        }
    }
    return x;
}

template <class Mul>
ComplexMatrix receive_kernel(std::span<const cplx> y, const ReceiverFilter& gamma, Mul mul) {
    const std::size_t K = gamma.K, M = gamma.M, N = gamma.N();
    require_length(gamma.taps.size(), N, "core_receive");
    require_length(y.size(), N, "core_receive");
    const auto scale = static_cast<double>(K);
    ComplexMatrix out(K, M);
    ComplexVector acc(K);
    for (std::size_t m = 0; m < M; ++m) {
        std::fill(acc.begin(), acc.end(), cplx{});
        // Fold while multiplying: sample n = qK + r lands in bin r.
        for (std::size_t q = 0; q < M; ++q) {
            const cplx* win = gamma.taps.data() + ((q + M - m) % M) * K;
            const cplx* rx = y.data() + q * K;
            for (std::size_t r = 0; r < K; ++r) acc[r] += mul(std::conj(win[r]), rx[r]);
        }
        for (std::size_t k = 0; k < K; ++k) out(k, m) = acc[k] * scale;
    }
    return out;
}

}  // namespace

// ---- GfdmParams / DataGrid ------------------------------------------------------------

GfdmParams::GfdmParams(std::size_t K, std::size_t M, std::vector<std::size_t> active_subcarriers,
                       std::vector<std::size_t> active_subsymbols)
    : K_(K), M_(M), subcarriers_(std::move(active_subcarriers)), subsymbols_(std::move(active_subsymbols)) {
    if (K == 0 || M == 0) throw std::invalid_argument("GfdmParams: K and M must be >= 1");
    if (subcarriers_.empty()) subcarriers_ = full_range(K);
    if (subsymbols_.empty()) subsymbols_ = full_range(M);
    carrier_mask_ = make_mask(subcarriers_, K, "subcarrier");
    symbol_mask_ = make_mask(subsymbols_, M, "subsymbol");
    std::sort(subcarriers_.begin(), subcarriers_.end());
    std::sort(subsymbols_.begin(), subsymbols_.end());
}

GfdmParams GfdmParams::with_active_counts(std::size_t K, std::size_t M, std::size_t k_on, std::size_t m_on) {
    if (k_on == 0 || k_on > K) throw std::invalid_argument("GfdmParams: Kon must be in [1, K]");
    if (m_on == 0 || m_on > M) throw std::invalid_argument("GfdmParams: Mon must be in [1, M]");
    std::vector<std::size_t> symbols;
    for (std::size_t m = M - m_on; m < M; ++m) symbols.push_back(m);
    return GfdmParams(K, M, centered_subcarriers(K, k_on), std::move(symbols));
}

bool GfdmParams::is_active(std::size_t k, std::size_t m) const {
    return k < K_ && m < M_ && carrier_mask_[k] && symbol_mask_[m];
}

std::vector<std::size_t> centered_subcarriers(std::size_t K, std::size_t count) {
    if (count == 0 || count > K) throw std::invalid_argument("centered_subcarriers: count must be in [1, K]");
    std::vector<std::size_t> out;
    const auto lo = -static_cast<long long>(count / 2);
    for (long long k = lo; k < lo + static_cast<long long>(count); ++k) out.push_back(wrap_index(k, K));
    std::sort(out.begin(), out.end());
    return out;
}

DataGrid::DataGrid(const GfdmParams& params, ComplexMatrix entries) : params_(params), entries_(std::move(entries)) {
    require_shape(entries_, params_.K(), params_.M(), "DataGrid");
    for (std::size_t k = 0; k < params_.K(); ++k)
        for (std::size_t m = 0; m < params_.M(); ++m)
            if (!params_.is_active(k, m)) entries_(k, m) = cplx{};
}

// ---- modulation matrix -----------------------------------------------------------------

ModulationMatrix build_mod_matrix(std::size_t K, std::size_t M, std::span<const cplx> taps) {
    const std::size_t N = K * M;
    require_length(taps.size(), N, "build_mod_matrix");
    ModulationMatrix out{K, M, ComplexMatrix(N, N)};
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t k = 0; k < K; ++k) {
            const std::size_t col = m * K + k;
            for (std::size_t n = 0; n < N; ++n) {
                out.A(n, col) = taps[wrap_index(static_cast<long long>(n) - static_cast<long long>(m * K), N)] *
                                subcarrier_phase(k, n, K);
            }
        }
    }
    return out;
}

ModulationMatrix build_mod_matrix(const PrototypeFilter& g) { return build_mod_matrix(g.K, g.M, g.taps); }

std::vector<double> gabor_singular_values(std::size_t K, std::size_t M, std::span<const cplx> taps) {
    require_length(taps.size(), K * M, "gabor_singular_values");
    std::vector<double> out;
    out.reserve(K * M);
    const double scale = std::sqrt(static_cast<double>(K));
    ComplexVector phase(M);
    for (std::size_t r = 0; r < K; ++r) {
        for (std::size_t q = 0; q < M; ++q) phase[q] = taps[r + q * K];
        for (const auto& z : dft(phase)) out.push_back(scale * std::abs(z));
    }
    return out;
}

double modulation_condition_number(std::size_t K, std::size_t M, std::span<const cplx> taps) {
    const auto s = gabor_singular_values(K, M, taps);
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (*lo == 0.0) return std::numeric_limits<double>::infinity();
    return *hi / *lo;
}

// ---- modulators -----------------------------------------------------------------------------

ComplexVector modulate_ref(const DataGrid& data, const ModulationMatrix& a) {
    require_shape(data.entries(), a.K, a.M, "modulate_ref");
    return a.A * vec(data.entries());
}

ComplexVector modulate_fd(const DataGrid& data, const PrototypeFilter& g) {
    const std::size_t K = g.K, M = g.M, N = g.N();
    require_shape(data.entries(), K, M, "modulate_fd");
    require_length(g.taps.size(), N, "modulate_fd");
    const ComplexVector G = dft(g.taps);
    ComplexVector spectrum(N, cplx{});
    for (std::size_t k = 0; k < K; ++k) {
        const ComplexVector row = data.entries().row(k);
        if (std::all_of(row.begin(), row.end(), [](const cplx& v) { return v == cplx{}; })) continue;
        // The M-point spectrum repeats K times over the N bins.
        const ComplexVector dk = dft(row);
        for (std::size_t f = 0; f < N; ++f) spectrum[f] += G[wrap_index(static_cast<long long>(f) - static_cast<long long>(k * M), N)] * dk[f % M];
    }
    return idft(spectrum);
}

ComplexVector modulate_td(const DataGrid& data, const PrototypeFilter& g) {
    const auto scheme = PrecodingScheme::preset(Domain::FT, g.K, g.M);
    return core_transmit(encode(data.entries(), scheme), g);
}

ComplexVector core_transmit(const ComplexMatrix& coefficients, const PrototypeFilter& g) {
    return transmit_kernel(coefficients, g, PlainMul{});
}

// ---- demodulators ----------------------------------------------------------------------------

ComplexMatrix core_receive(std::span<const cplx> y, const ReceiverFilter& gamma) {
    return receive_kernel(y, gamma, PlainMul{});
}

ComplexMatrix demodulate_td(std::span<const cplx> y, const ReceiverFilter& gamma) {
    return decode(core_receive(y, gamma), PrecodingScheme::preset(Domain::FT, gamma.K, gamma.M));
}

ComplexMatrix demodulate_fd(std::span<const cplx> y, const ReceiverFilter& gamma) {
    const std::size_t K = gamma.K, M = gamma.M, N = gamma.N();
    require_length(gamma.taps.size(), N, "demodulate_fd");
    require_length(y.size(), N, "demodulate_fd");
    const ComplexVector Y = dft(y);
    const ComplexVector Gamma = dft(gamma.taps);
    const double scale = 1.0 / static_cast<double>(K);  // 1/N * W_M^H = (1/K) * idft_M
    ComplexMatrix out(K, M);
    ComplexVector folded(M);
    for (std::size_t k = 0; k < K; ++k) {
        std::fill(folded.begin(), folded.end(), cplx{});
        for (std::size_t f = 0; f < N; ++f) folded[f % M] += std::conj(Gamma[f]) * Y[(f + k * M) % N];
        const ComplexVector dk = idft(folded);
        for (std::size_t m = 0; m < M; ++m) out(k, m) = dk[m] * scale;
    }
    return out;
}

ComplexMatrix demodulate_ref(std::span<const cplx> y, const ReceiverFilter& gamma) {
    require_length(y.size(), gamma.N(), "demodulate_ref");
    const ModulationMatrix b = build_mod_matrix(gamma.K, gamma.M, gamma.taps);
    ComplexVector d(gamma.N(), cplx{});
    for (std::size_t n = 0; n < gamma.N(); ++n) {
        const cplx yn = y[n];
        for (std::size_t col = 0; col < gamma.N(); ++col) d[col] += std::conj(b.A(n, col)) * yn;
    }
    return unvec(d, gamma.K, gamma.M);
}

// ---- instrumented --------------------------------------------------------------------------------

CountedTransmit core_transmit_counted(const ComplexMatrix& coefficients, const PrototypeFilter& g) {
    CountedTransmit out;
    out.signal = transmit_kernel(coefficients, g, CountingMul{&out.complex_multiplies});
    return out;
}

CountedReceive core_receive_counted(std::span<const cplx> y, const ReceiverFilter& gamma) {
    CountedReceive out;
    out.coefficients = receive_kernel(y, gamma, CountingMul{&out.complex_multiplies});
    return out;
}

}  // namespace gfdm
