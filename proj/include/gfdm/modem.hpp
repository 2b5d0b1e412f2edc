#pragma once

// GFDM modulation and demodulation.
//
// Three equivalent pipelines are provided:
//   *_ref  dense N x N modulation matrix (O(N^2) per block, kept as oracle)
//   *_fd   per-subcarrier circular convolution in the N-point frequency domain
//   *_td   per-subsymbol element-wise multiplication in time (core_transmit /
//          core_receive) with the subcarrier transform split off as precoding
//
// Index convention: subsymbol m is delayed by m*K samples, subcarrier k is
// shifted by k*M bins. Data grids are K x M with entry (k, m) = d_{k,m}.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gfdm/filters.hpp"
#include "gfdm/numerics.hpp"

namespace gfdm {

/// Block geometry plus the active (non-null) resources.
class GfdmParams {
public:
    /// Empty active sets mean "all active". Throws std::invalid_argument on
    /// zero sizes, out-of-range or duplicate indices.
    GfdmParams(std::size_t K, std::size_t M, std::vector<std::size_t> active_subcarriers = {},
               std::vector<std::size_t> active_subsymbols = {});

    /// Kon subcarriers centred on DC and the last Mon subsymbols (leading guard).
    static GfdmParams with_active_counts(std::size_t K, std::size_t M, std::size_t k_on, std::size_t m_on);

    std::size_t K() const noexcept { return K_; }
    std::size_t M() const noexcept { return M_; }
    std::size_t N() const noexcept { return K_ * M_; }
    const std::vector<std::size_t>& active_subcarriers() const noexcept { return subcarriers_; }
    const std::vector<std::size_t>& active_subsymbols() const noexcept { return subsymbols_; }
    bool is_active(std::size_t k, std::size_t m) const;
    std::size_t active_count() const noexcept { return subcarriers_.size() * subsymbols_.size(); }

    friend bool operator==(const GfdmParams&, const GfdmParams&) = default;

private:
    std::size_t K_;
    std::size_t M_;
    std::vector<std::size_t> subcarriers_;
    std::vector<std::size_t> subsymbols_;
    std::vector<bool> carrier_mask_;
    std::vector<bool> symbol_mask_;
};

/// Subcarrier indices <-floor(n/2) .. ceil(n/2)-1>_K.
std::vector<std::size_t> centered_subcarriers(std::size_t K, std::size_t count);

/// K x M data block; entries outside the active sets are forced to zero.
class DataGrid {
public:
    DataGrid(const GfdmParams& params, ComplexMatrix entries);

    const GfdmParams& params() const noexcept { return params_; }
    const ComplexMatrix& entries() const noexcept { return entries_; }

private:
    GfdmParams params_;
    ComplexMatrix entries_;
};

/// Column (k, m), in vec order (k fastest), is circ_shift(g, mK) .* exp(j2pi k n / K).
struct ModulationMatrix {
    std::size_t K = 0;
    std::size_t M = 0;
    ComplexMatrix A;
};

ModulationMatrix build_mod_matrix(std::size_t K, std::size_t M, std::span<const cplx> taps);
ModulationMatrix build_mod_matrix(const PrototypeFilter& g);

/// Singular values of the modulation matrix via its polyphase structure:
/// sqrt(K) * |DFT_M(g[r + qK])_l| for r < K, l < M (unsorted).
std::vector<double> gabor_singular_values(std::size_t K, std::size_t M, std::span<const cplx> taps);
double modulation_condition_number(std::size_t K, std::size_t M, std::span<const cplx> taps);

// ---- modulators --------------------------------------------------------------

ComplexVector modulate_ref(const DataGrid& data, const ModulationMatrix& a);
ComplexVector modulate_fd(const DataGrid& data, const PrototypeFilter& g);
ComplexVector modulate_td(const DataGrid& data, const PrototypeFilter& g);

/// x = sum_m P^(m) diag(g) R^(M,K) delta_m for a K x M coefficient block.
/// No transform inside; precoding supplies it.
ComplexVector core_transmit(const ComplexMatrix& coefficients, const PrototypeFilter& g);

// ---- demodulators -------------------------------------------------------------

/// Column m = K * fold_M(conj(circ_shift(gamma, mK)) .* y). The factor K makes
/// core_receive the exact inverse of core_transmit when gamma is the ZF window.
ComplexMatrix core_receive(std::span<const cplx> y, const ReceiverFilter& gamma);

/// d_{k,m} = sum_n conj(gamma[<n - mK>]) y[n] exp(-j2pi k n / K), computed as
/// FT decoding of core_receive (K-point DFT of the folded products).
ComplexMatrix demodulate_td(std::span<const cplx> y, const ReceiverFilter& gamma);
ComplexMatrix demodulate_fd(std::span<const cplx> y, const ReceiverFilter& gamma);
/// Dense A_gamma^H y with A_gamma the modulation matrix built from gamma.
ComplexMatrix demodulate_ref(std::span<const cplx> y, const ReceiverFilter& gamma);

// ---- instrumented core -------------------------------------------------------

/// Same arithmetic as core_transmit/core_receive, counting complex*complex products.
struct CountedTransmit {
    ComplexVector signal;
    std::uint64_t complex_multiplies = 0;
};
struct CountedReceive {
    ComplexMatrix coefficients;
    std::uint64_t complex_multiplies = 0;
};

CountedTransmit core_transmit_counted(const ComplexMatrix& coefficients, const PrototypeFilter& g);
CountedReceive core_receive_counted(std::span<const cplx> y, const ReceiverFilter& gamma);

}  // namespace gfdm
