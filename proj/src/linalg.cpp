#include "gfdm/linalg.hpp"

#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace gfdm::linalg {

namespace {

using EMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EMatrix> view(const ComplexMatrix& a) {
    return {a.data().data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols() || a.empty()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

}  // namespace

ComplexVector solve(const ComplexMatrix& a, std::span<const cplx> b) {
    require_square(a, "solve");
    if (b.size() != a.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
    Eigen::Map<const Eigen::VectorXcd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXcd x = view(a).partialPivLu().solve(rhs);
    return ComplexVector(x.data(), x.data() + x.size());
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    require_square(a, "inverse");
    const EMatrix inv = view(a).partialPivLu().inverse();
    return ComplexMatrix(a.rows(), a.cols(), ComplexVector(inv.data(), inv.data() + inv.size()));
}

ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("product: inner dimensions differ");
    const EMatrix c = view(a) * view(b);
    return ComplexMatrix(a.rows(), b.cols(), ComplexVector(c.data(), c.data() + c.size()));
}

std::vector<double> singular_values(const ComplexMatrix& a) {
    if (a.empty()) throw std::invalid_argument("singular_values: empty matrix");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(view(a)));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

double condition_number(const ComplexMatrix& a) {
    const auto s = singular_values(a);
    if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
    return s.front() / s.back();
}

}  // namespace gfdm::linalg
