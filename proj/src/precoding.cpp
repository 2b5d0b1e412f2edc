#include "gfdm/precoding.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

#include "gfdm/errors.hpp"
#include "gfdm/filters.hpp"
#include "gfdm/linalg.hpp"

namespace gfdm {

std::string_view to_string(Domain domain) {
    switch (domain) {
        case Domain::FT: return "FT";
        case Domain::TT: return "TT";
        case Domain::FF: return "FF";
        case Domain::TF: return "TF";
        case Domain::custom: return "custom";
    }
    return "unknown";
}

Domain parse_domain(std::string_view name) {
    for (auto d : {Domain::FT, Domain::TT, Domain::FF, Domain::TF, Domain::custom}) {
        if (to_string(d) == name) return d;
    }
    throw std::invalid_argument("unknown precoding domain '" + std::string(name) + "'");
}

// ---- AxisTransform --------------------------------------------------------------

AxisTransform::AxisTransform(Kind kind, std::size_t n, ComplexMatrix matrix)
    : kind_(kind), n_(n), matrix_(std::move(matrix)) {}

AxisTransform AxisTransform::identity(std::size_t n) { return {Kind::identity, n, {}}; }
AxisTransform AxisTransform::conj_dft(std::size_t n) { return {Kind::conj_dft, n, {}}; }
AxisTransform AxisTransform::scaled_dft(std::size_t n) { return {Kind::scaled_dft, n, {}}; }

AxisTransform AxisTransform::dense(ComplexMatrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.empty()) {
        throw std::invalid_argument("AxisTransform: dense transform must be square and non-empty");
    }
    const std::size_t n = matrix.rows();
    return {Kind::dense, n, std::move(matrix)};
}

ComplexVector AxisTransform::apply(std::span<const cplx> v) const {
    if (v.size() != n_) throw std::invalid_argument("AxisTransform: length mismatch");
    switch (kind_) {
        case Kind::identity: return ComplexVector(v.begin(), v.end());
        case Kind::conj_dft: {
            auto out = idft(v);
            for (auto& x : out) x *= static_cast<double>(n_);
            return out;
        }
        case Kind::scaled_dft: {
            auto out = dft(v);
            for (auto& x : out) x /= static_cast<double>(n_);
            return out;
        }
        case Kind::dense: return matrix_ * v;
    }
    return {};
}

ComplexVector AxisTransform::apply_transposed(std::span<const cplx> v) const {
    // DFT matrices are symmetric.
    if (kind_ != Kind::dense) return apply(v);
    if (v.size() != n_) throw std::invalid_argument("AxisTransform: length mismatch");
    ComplexVector out(n_, cplx{});
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out[c] += matrix_(r, c) * v[r];
    return out;
}

ComplexMatrix AxisTransform::matrix() const {
    switch (kind_) {
        case Kind::identity: return ComplexMatrix::identity(n_);
        case Kind::conj_dft: return dft_matrix(n_).adjoint();
        case Kind::scaled_dft: return (1.0 / static_cast<double>(n_)) * dft_matrix(n_);
        case Kind::dense: return matrix_;
    }
    return {};
}

// ---- PrecodingScheme ---------------------------------------------------------------

PrecodingScheme::PrecodingScheme(Domain domain, AxisTransform tc, AxisTransform tr, AxisTransform sc,
                                 AxisTransform sr)
    : domain_(domain), tc_(std::move(tc)), tr_(std::move(tr)), sc_(std::move(sc)), sr_(std::move(sr)) {}

PrecodingScheme PrecodingScheme::preset(Domain domain, std::size_t K, std::size_t M) {
    if (K == 0 || M == 0) throw std::invalid_argument("PrecodingScheme: K and M must be >= 1");
    const bool freq_columns = domain == Domain::FT || domain == Domain::FF;
    const bool freq_rows = domain == Domain::FF || domain == Domain::TF;
    if (domain == Domain::custom) throw std::invalid_argument("PrecodingScheme: custom domain has no preset");
    return PrecodingScheme(domain,
                           freq_columns ? AxisTransform::conj_dft(K) : AxisTransform::identity(K),
                           freq_rows ? AxisTransform::conj_dft(M) : AxisTransform::identity(M),
                           freq_columns ? AxisTransform::scaled_dft(K) : AxisTransform::identity(K),
                           freq_rows ? AxisTransform::scaled_dft(M) : AxisTransform::identity(M));
}

PrecodingScheme PrecodingScheme::custom(const ComplexMatrix& column_transform, const ComplexMatrix& row_transform) {
    auto checked_inverse = [](const ComplexMatrix& t, const char* which) {
        if (t.rows() != t.cols() || t.empty()) {
            throw std::invalid_argument(std::string("PrecodingScheme: ") + which + " transform must be square");
        }
        const double cond = linalg::condition_number(t);
        if (!(cond < kMaxConditionNumber)) {
            std::ostringstream msg;
            msg << "PrecodingScheme: " << which << " transform is not invertible (condition number " << cond << ")";
            throw SingularMatrixError(msg.str(), cond);
        }
        return linalg::inverse(t);
    };
    auto sc = checked_inverse(column_transform, "column");
    auto sr = checked_inverse(row_transform, "row");
    return PrecodingScheme(Domain::custom, AxisTransform::dense(column_transform),
                           AxisTransform::dense(row_transform), AxisTransform::dense(std::move(sc)),
                           AxisTransform::dense(std::move(sr)));
}

namespace {

ComplexMatrix apply_pair(const ComplexMatrix& block, const AxisTransform& left, const AxisTransform& right) {
    if (block.rows() != left.size() || block.cols() != right.size()) {
        throw std::invalid_argument("precoding: block is " + std::to_string(block.rows()) + "x" +
                                    std::to_string(block.cols()) + ", scheme expects " +
                                    std::to_string(left.size()) + "x" + std::to_string(right.size()));
    }
    ComplexMatrix out(block.rows(), block.cols());
    for (std::size_t c = 0; c < block.cols(); ++c) out.set_column(c, left.apply(block.column(c)));
    if (right.kind() == AxisTransform::Kind::identity) return out;
    // (X T)[r, :] = T^T X[r, :]^T
    for (std::size_t r = 0; r < out.rows(); ++r) out.set_row(r, right.apply_transposed(out.row(r)));
    return out;
}

}  // namespace

ComplexMatrix encode(const ComplexMatrix& data, const PrecodingScheme& scheme) {
    return apply_pair(data, scheme.column_transform(), scheme.row_transform());
}

ComplexMatrix decode(const ComplexMatrix& coefficients, const PrecodingScheme& scheme) {
    return apply_pair(coefficients, scheme.column_inverse(), scheme.row_inverse());
}

ComplexMatrix general_matrix(const PrecodingScheme& scheme) {
    return kron(scheme.row_transform().matrix().transpose(), scheme.column_transform().matrix());
}

ComplexMatrix encode_general(const ComplexMatrix& data, const ComplexMatrix& precoder) {
    if (precoder.rows() != data.size() || precoder.cols() != data.size()) {
        throw std::invalid_argument("encode_general: precoder must be N x N with N = rows * cols of the block");
    }
    return unvec(precoder * vec(data), data.rows(), data.cols());
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::uint64_t exact_log2(std::size_t n) {
    if (!is_power_of_two(n)) {
        throw UnsupportedSizeError("n*log2(n) cost model needs a power-of-two length, got " + std::to_string(n));
    }
    std::uint64_t l = 0;
    while ((std::size_t{1} << l) < n) ++l;
    return l;
}

std::uint64_t precoding_mults(Domain domain, std::size_t K, std::size_t M) {
    const std::uint64_t n = static_cast<std::uint64_t>(K) * M;
    switch (domain) {
        case Domain::FT: return n * exact_log2(K);
        case Domain::TT: return 0;
        case Domain::FF: return n * exact_log2(K) + n * exact_log2(M);
        case Domain::TF: return n * exact_log2(M);
        case Domain::custom: break;
    }
    throw std::invalid_argument("precoding_mults: no closed form for custom schemes");
}

}  // namespace gfdm
