#pragma once

// Dense complex linear algebra (LU solve, inverse, SVD), Eigen-backed.
// Cost is O(n^3); use only where the dense form is the point.

#include <span>
#include <vector>

#include "gfdm/numerics.hpp"

namespace gfdm::linalg {

/// Solves a x = b with partial-pivot LU.
ComplexVector solve(const ComplexMatrix& a, std::span<const cplx> b);

ComplexMatrix inverse(const ComplexMatrix& a);

/// a * b through Eigen's blocked product.
ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Descending singular values.
std::vector<double> singular_values(const ComplexMatrix& a);

/// sigma_max / sigma_min; +inf for an exactly singular matrix.
double condition_number(const ComplexMatrix& a);

}  // namespace gfdm::linalg
