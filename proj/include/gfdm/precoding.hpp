#pragma once

// Block precoding Delta = T_c * D * T_r and its inverse D = S_c * Delta * S_r.
//
// Presets (data domain along columns/rows):
//   FT  (W_K^H, I_M)     standard GFDM
//   TT  (I_K,   I_M)
//   FF  (W_K^H, W_M^H)
//   TF  (I_K,   W_M^H)
// W^H is the unnormalized conjugate DFT matrix, so its inverse is W / n.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "gfdm/numerics.hpp"

namespace gfdm {

enum class Domain { FT, TT, FF, TF, custom };

std::string_view to_string(Domain domain);
Domain parse_domain(std::string_view name);

/// Square transform applied along one axis of the block. Preset kinds are
/// applied with the FFT; dense ones by matrix multiplication.
class AxisTransform {
public:
    enum class Kind { identity, conj_dft, scaled_dft, dense };

    static AxisTransform identity(std::size_t n);
    /// W_n^H (= n * idft).
    static AxisTransform conj_dft(std::size_t n);
    /// W_n / n (= dft / n), the inverse of conj_dft.
    static AxisTransform scaled_dft(std::size_t n);
    static AxisTransform dense(ComplexMatrix matrix);

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }

    /// T v
    ComplexVector apply(std::span<const cplx> v) const;
    /// T^T v
    ComplexVector apply_transposed(std::span<const cplx> v) const;
    ComplexMatrix matrix() const;

private:
    AxisTransform(Kind kind, std::size_t n, ComplexMatrix matrix);

    Kind kind_;
    std::size_t n_;
    ComplexMatrix matrix_;
};

class PrecodingScheme {
public:
    /// Table presets; throws std::invalid_argument for Domain::custom or zero sizes.
    static PrecodingScheme preset(Domain domain, std::size_t K, std::size_t M);

    /// Any invertible pair. Throws SingularMatrixError when either factor has
    /// condition number >= 1e10.
    static PrecodingScheme custom(const ComplexMatrix& column_transform, const ComplexMatrix& row_transform);

    Domain domain() const noexcept { return domain_; }
    std::size_t K() const noexcept { return tc_.size(); }
    std::size_t M() const noexcept { return tr_.size(); }

    const AxisTransform& column_transform() const noexcept { return tc_; }
    const AxisTransform& row_transform() const noexcept { return tr_; }
    const AxisTransform& column_inverse() const noexcept { return sc_; }
    const AxisTransform& row_inverse() const noexcept { return sr_; }

private:
    PrecodingScheme(Domain domain, AxisTransform tc, AxisTransform tr, AxisTransform sc, AxisTransform sr);

    Domain domain_;
    AxisTransform tc_;
    AxisTransform tr_;
    AxisTransform sc_;
    AxisTransform sr_;
};

/// Delta = T_c * D * T_r.
ComplexMatrix encode(const ComplexMatrix& data, const PrecodingScheme& scheme);
/// D = S_c * Delta * S_r.
ComplexMatrix decode(const ComplexMatrix& coefficients, const PrecodingScheme& scheme);

/// T_r^T kron T_c, so vec(encode(D)) = general_matrix * vec(D).
ComplexMatrix general_matrix(const PrecodingScheme& scheme);

/// Raw N x N precoder acting on vec(D); no Kronecker structure required.
ComplexMatrix encode_general(const ComplexMatrix& data, const ComplexMatrix& precoder);

/// Complex multiplications of the preset precoding stage, with an n-point DFT
/// costed at n*log2(n). Throws UnsupportedSizeError when a needed DFT length
/// is not a power of two, std::invalid_argument for Domain::custom.
std::uint64_t precoding_mults(Domain domain, std::size_t K, std::size_t M);

bool is_power_of_two(std::size_t n);
/// log2 of a power of two; throws UnsupportedSizeError otherwise.
std::uint64_t exact_log2(std::size_t n);

}  // namespace gfdm
