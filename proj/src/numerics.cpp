#include "gfdm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gfdm/fft.hpp"

namespace gfdm {

// ---- ComplexMatrix ----------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("ComplexMatrix: element count " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::ones(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols, ComplexVector(rows * cols, cplx{1.0, 0.0}));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
    ComplexVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

ComplexVector ComplexMatrix::row(std::size_t r) const {
    return ComplexVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> values) {
    if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

void ComplexMatrix::set_row(std::size_t r, std::span<const cplx> values) {
    if (values.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix +: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix -: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
    for (auto& v : data_) v *= scale;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix *: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector *: length mismatch");
    ComplexVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{};
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx scale, ComplexMatrix a) { return a *= scale; }

// ---- transforms ---------------------------------------------------------------

ComplexVector dft(std::span<const cplx> v) {
    if (v.empty()) throw std::invalid_argument("dft: empty input");
    ComplexVector out(v.size());
    fft::plan_for(v.size())->execute(v, out, -1);
    return out;
}

ComplexVector idft(std::span<const cplx> spectrum) {
    if (spectrum.empty()) throw std::invalid_argument("idft: empty input");
    ComplexVector out(spectrum.size());
    fft::plan_for(spectrum.size())->execute(spectrum, out, +1);
    const double scale = 1.0 / static_cast<double>(spectrum.size());
    for (auto& x : out) x *= scale;
    return out;
}

ComplexVector dft_direct(std::span<const cplx> v) {
    if (v.empty()) throw std::invalid_argument("dft_direct: empty input");
    const std::size_t n = v.size();
    ComplexVector out(n);
    for (std::size_t f = 0; f < n; ++f) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((f * t) % n) / static_cast<double>(n);
            acc += v[t] * std::polar(1.0, phase);
        }
        out[f] = acc;
    }
    return out;
}

ComplexMatrix dft_matrix(std::size_t n) {
    ComplexMatrix w(n, n);
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t t = 0; t < n; ++t)
            w(f, t) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((f * t) % n) /
                                          static_cast<double>(n));
    return w;
}

// ---- index operators -------------------------------------------------------------

std::size_t wrap_index(long long i, std::size_t n) {
    const auto nn = static_cast<long long>(n);
    long long r = i % nn;
    if (r < 0) r += nn;
    return static_cast<std::size_t>(r);
}

ComplexVector circ_shift(std::span<const cplx> v, long long shift) {
    const std::size_t n = v.size();
    ComplexVector out(n);
    if (n == 0) return out;
    const std::size_t s = wrap_index(shift, n);
    for (std::size_t i = 0; i < n; ++i) out[(i + s) % n] = v[i];
    return out;
}

ComplexVector fold_accumulate(std::span<const cplx> u, std::size_t m) {
    if (m == 0 || u.size() % m != 0) {
        throw std::invalid_argument("fold_accumulate: M=" + std::to_string(m) + " does not divide N=" +
                                    std::to_string(u.size()));
    }
    const std::size_t k = u.size() / m;
    ComplexVector out(k, cplx{});
    for (std::size_t chunk = 0; chunk < m; ++chunk)
        for (std::size_t i = 0; i < k; ++i) out[i] += u[chunk * k + i];
    return out;
}

ComplexVector repeat_tile(std::span<const cplx> v, std::size_t times) {
    if (times < 1) throw std::invalid_argument("repeat_tile: times must be >= 1");
    ComplexVector out;
    out.reserve(v.size() * times);
    for (std::size_t t = 0; t < times; ++t) out.insert(out.end(), v.begin(), v.end());
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

ComplexVector vec(const ComplexMatrix& m) {
    ComplexVector out;
    out.reserve(m.size());
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m(r, c));
    return out;
}

ComplexMatrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
    if (rows * cols != v.size()) {
        throw std::invalid_argument("unvec: " + std::to_string(rows) + "x" + std::to_string(cols) +
                                    " does not match length " + std::to_string(v.size()));
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = v[c * rows + r];
    return m;
}

ComplexMatrix circulant(std::span<const cplx> p) {
    const std::size_t n = p.size();
    ComplexMatrix m(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = p[(r + n - c) % n];
    return m;
}

ComplexVector unit_vector(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("unit_vector: index out of range");
    ComplexVector e(n, cplx{});
    e[index] = 1.0;
    return e;
}

// ---- element-wise -------------------------------------------------------------------

ComplexVector hadamard(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hadamard: length mismatch");
    ComplexVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ComplexVector conj(std::span<const cplx> v) {
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

double norm2(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double relative_error(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("relative_error: length mismatch");
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a[i] - b[i]);
    return std::sqrt(diff) / std::max(norm2(b), 1e-300);
}

bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(),
                       [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

}  // namespace gfdm
