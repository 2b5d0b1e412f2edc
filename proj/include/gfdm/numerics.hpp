#pragma once

// Complex vector/matrix kernel shared by every GFDM module.
//
// Conventions (used everywhere in the library):
//   dft   V[f] = sum_n v[n] exp(-j 2 pi f n / N)        (unnormalized, = W_N v)
//   idft  v[n] = 1/N sum_f V[f] exp(+j 2 pi f n / N)    (= 1/N W_N^H V)
//   circ_shift delays: out[n] = in[<n - s>_N]
//   vec stacks columns, so the row index runs fastest.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gfdm {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector row_major);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix ones(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(std::span<const cplx> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    ComplexVector column(std::size_t c) const;
    ComplexVector row(std::size_t r) const;
    void set_column(std::size_t c, std::span<const cplx> values);
    void set_row(std::size_t r, std::span<const cplx> values);

    ComplexMatrix transpose() const;
    ComplexMatrix adjoint() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    ComplexVector data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scale, ComplexMatrix a);

// ---- transforms ---------------------------------------------------------

ComplexVector dft(std::span<const cplx> v);
ComplexVector idft(std::span<const cplx> spectrum);

/// Direct O(N^2) summation. Reference for the fast transform; not for hot paths.
ComplexVector dft_direct(std::span<const cplx> v);

/// W_n, entry (f, t) = exp(-j 2 pi f t / n).
ComplexMatrix dft_matrix(std::size_t n);

// ---- index operators ----------------------------------------------------

/// Reduces any integer modulo n into [0, n).
std::size_t wrap_index(long long i, std::size_t n);

ComplexVector circ_shift(std::span<const cplx> v, long long shift);

/// out[n] = sum_m u[<n - mK>_N], n < K = N/M. Every M-th bin of dft(u) is dft(out).
ComplexVector fold_accumulate(std::span<const cplx> u, std::size_t m);

/// v concatenated `times` times, i.e. (1_{times,1} kron I) v.
ComplexVector repeat_tile(std::span<const cplx> v, std::size_t times);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols);

/// Column 0 is p, column c is circ_shift(p, c).
ComplexMatrix circulant(std::span<const cplx> p);

ComplexVector unit_vector(std::size_t n, std::size_t index);

// ---- element-wise helpers ------------------------------------------------

ComplexVector hadamard(std::span<const cplx> a, std::span<const cplx> b);
ComplexVector conj(std::span<const cplx> v);
double norm2(std::span<const cplx> v);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);
/// ||a - b|| / max(||b||, tiny).
double relative_error(std::span<const cplx> a, std::span<const cplx> b);
bool all_finite(std::span<const cplx> v);

}  // namespace gfdm
