#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "gfdm/fft.hpp"
#include "gfdm/linalg.hpp"
#include "gfdm/numerics.hpp"
#include "oracles.hpp"

using namespace gfdm;

namespace {

bool near(const ComplexVector& a, const ComplexVector& b, double tol) {
    return a.size() == b.size() && oracle::max_diff(a, b) < tol;
}

}  // namespace

TEST_CASE("dft of an impulse is all ones") {
    CHECK(near(dft(ComplexVector{1, 0, 0, 0}), {1, 1, 1, 1}, 1e-15));
}

TEST_CASE("dft of [1,2,3,4] matches direct summation") {
    const ComplexVector v{1, 2, 3, 4};
    const ComplexVector expected{10, {-2, 2}, -2, {-2, -2}};
    CHECK(near(oracle::naive_dft(v), expected, 1e-12));
    CHECK(near(dft(v), expected, 1e-12));
}

TEST_CASE("dft of a constant concentrates at DC") {
    const cplx c{0.5, -1.5};
    const auto out = dft(ComplexVector(7, c));
    CHECK(std::abs(out[0] - 7.0 * c) < 1e-12);
    for (std::size_t f = 1; f < 7; ++f) CHECK(std::abs(out[f]) < 1e-12);
}

TEST_CASE("idft examples") {
    CHECK(near(idft(ComplexVector{5, 0, 0, 0, 0}), ComplexVector(5, 1.0), 1e-14));
    CHECK(near(idft(ComplexVector{10, {-2, 2}, -2, {-2, -2}}), {1, 2, 3, 4}, 1e-14));
}

TEST_CASE("fft agrees with direct sums for many lengths") {
    std::mt19937_64 rng(11);
    // powers of two, odd radices, mixed radices and Bluestein primes
    for (std::size_t n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 16, 30, 36, 60, 64, 67, 97, 128, 210, 257, 1200}) {
        CAPTURE(n);
        const auto v = oracle::random_vector(n, rng);
        const auto ref = oracle::naive_dft(v);
        CHECK(oracle::rel_err(dft(v), ref) < 1e-12);
        CHECK(oracle::rel_err(idft(dft(v)), v) < 1e-12);
        CHECK(oracle::rel_err(dft_direct(v), ref) < 1e-12);
    }
}

TEST_CASE("fft plans") {
    CHECK(fft::Plan(97).uses_bluestein());
    CHECK_FALSE(fft::Plan(60).uses_bluestein());
    CHECK(fft::plan_for(48) == fft::plan_for(48));
    CHECK_THROWS_AS(dft(ComplexVector{}), std::invalid_argument);
}

TEST_CASE("dft_matrix matches the exponential definition") {
    CHECK(oracle::fro_diff(dft_matrix(6), oracle::naive_dft_matrix(6)) < 1e-12);
}

TEST_CASE("circ_shift") {
    const ComplexVector v{1, 2, 3, 4};
    CHECK(circ_shift(v, 1) == ComplexVector{4, 1, 2, 3});
    CHECK(circ_shift(v, 0) == v);
    CHECK(circ_shift(v, 4) == v);
    CHECK(circ_shift(v, -1) == ComplexVector{2, 3, 4, 1});
    CHECK(wrap_index(-9, 4) == 3);
}

TEST_CASE("fold_accumulate") {
    CHECK(fold_accumulate(ComplexVector{1, 2, 3, 4}, 2) == ComplexVector{4, 6});
    const ComplexVector u{1, {2, 1}, 3};
    CHECK(fold_accumulate(u, 1) == u);
    CHECK_THROWS_AS(fold_accumulate(ComplexVector{1, 2, 3}, 2), std::invalid_argument);

    // every M-th bin of the long transform is the short transform of the fold
    const auto folded = fold_accumulate(ComplexVector{1, 2, 3, 4}, 2);
    const auto full = oracle::naive_dft({1, 2, 3, 4});
    const auto short_t = oracle::naive_dft(folded);
    CHECK(std::abs(short_t[0] - full[0]) < 1e-12);
    CHECK(std::abs(short_t[1] - full[2]) < 1e-12);
}

TEST_CASE("repeat_tile") {
    CHECK(repeat_tile(ComplexVector{1, 2}, 3) == ComplexVector{1, 2, 1, 2, 1, 2});
    CHECK(repeat_tile(ComplexVector{1, 2}, 1) == ComplexVector{1, 2});
    CHECK_THROWS_AS(repeat_tile(ComplexVector{1}, 0), std::invalid_argument);
}

TEST_CASE("repeated M-point spectrum is the spectrum of an upsampled sequence") {
    // The DFT of a sequence with d at every K-th sample is dft_M(d) concatenated K times.
    std::mt19937_64 rng(3);
    const std::size_t K = 3, M = 5;
    const auto d = oracle::random_vector(M, rng);
    ComplexVector up(K * M);
    for (std::size_t m = 0; m < M; ++m) up[m * K] = d[m];
    CHECK(oracle::max_diff(repeat_tile(dft(d), K), oracle::naive_dft(up)) < 1e-12);
}

TEST_CASE("kron") {
    CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3)) == ComplexMatrix::identity(6));
    const auto rep = kron(ComplexMatrix::ones(2, 1), ComplexMatrix::identity(2));
    CHECK(rep == ComplexMatrix{{1, 0}, {0, 1}, {1, 0}, {0, 1}});

    std::mt19937_64 rng(5);
    const auto a = oracle::random_matrix(2, 2, rng);
    const auto b = oracle::random_matrix(2, 2, rng);
    const auto k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q) CHECK(std::abs(k(2 * i + p, 2 * j + q) - a(i, j) * b(p, q)) < 1e-15);
}

TEST_CASE("vec and unvec") {
    const ComplexMatrix d{{1, 2}, {3, 4}};
    CHECK(vec(d) == ComplexVector{1, 3, 2, 4});
    CHECK(unvec(vec(d), 2, 2) == d);
    CHECK_THROWS_AS(unvec(ComplexVector{1, 2, 3}, 2, 2), std::invalid_argument);

    std::mt19937_64 rng(8);
    const auto tc = oracle::random_matrix(2, 2, rng);
    const auto dd = oracle::random_matrix(2, 3, rng);
    const auto tr = oracle::random_matrix(3, 3, rng);
    const auto lhs = vec(oracle::matmul(oracle::matmul(tc, dd), tr));
    const auto rhs = oracle::matvec(kron(tr.transpose(), tc), vec(dd));
    CHECK(oracle::max_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("circulant") {
    CHECK(circulant(ComplexVector{1, 0}) == ComplexMatrix::identity(2));
    CHECK(circulant(ComplexVector{0, 1}) == ComplexMatrix{{0, 1}, {1, 0}});

    // circulant(e_k) kron I_M shifts by kM
    std::mt19937_64 rng(9);
    const std::size_t K = 4, M = 3;
    const auto x = oracle::random_vector(K * M, rng);
    for (std::size_t k = 0; k < K; ++k) {
        const auto op = kron(circulant(unit_vector(K, k)), ComplexMatrix::identity(M));
        CHECK(oracle::max_diff(oracle::matvec(op, x), circ_shift(x, static_cast<long long>(k * M))) < 1e-15);
    }
}

TEST_CASE("matrix helpers") {
    const ComplexMatrix a{{1, {0, 1}}, {2, 3}};
    CHECK(a.adjoint() == ComplexMatrix{{1, 2}, {{0, -1}, 3}});
    CHECK(a.transpose() == ComplexMatrix{{1, 2}, {{0, 1}, 3}});
    CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(15.0)));
    CHECK(a * ComplexMatrix::identity(2) == a);
    CHECK_THROWS_AS(a * ComplexMatrix(3, 3), std::invalid_argument);
    CHECK(hadamard(ComplexVector{1, 2}, ComplexVector{3, 4}) == ComplexVector{3, 8});
    CHECK(norm2(ComplexVector{3, {0, 4}}) == doctest::Approx(5.0));
    CHECK(relative_error(ComplexVector{1, 1}, ComplexVector{1, 1}) == 0.0);
    CHECK_FALSE(all_finite(ComplexVector{std::nan("")}));
}

TEST_CASE("linalg against the Gauss-Jordan oracle") {
    std::mt19937_64 rng(21);
    const auto a = oracle::random_matrix(6, 6, rng);
    CHECK(oracle::fro_diff(linalg::inverse(a), oracle::invert(a)) < 1e-10 * oracle::fro(oracle::invert(a)));
    const auto b = oracle::random_vector(6, rng);
    CHECK(oracle::rel_err(linalg::solve(a, b), oracle::matvec(oracle::invert(a), b)) < 1e-10);
    CHECK(oracle::fro_diff(linalg::product(a, a), oracle::matmul(a, a)) < 1e-10);

    const auto sv = linalg::singular_values(ComplexMatrix::diagonal(ComplexVector{3, {0, -5}, 1}));
    REQUIRE(sv.size() == 3);
    CHECK(sv[0] == doctest::Approx(5.0));
    CHECK(sv[2] == doctest::Approx(1.0));
    CHECK(linalg::condition_number(ComplexMatrix{{1, 1}, {1, 1}}) > 1e15);
}
