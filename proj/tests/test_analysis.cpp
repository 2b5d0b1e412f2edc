#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfdm/analysis.hpp"
#include "gfdm/errors.hpp"
#include "oracles.hpp"

using namespace gfdm;

TEST_CASE("complexity reports") {
    const auto ofdm = pipeline_mults(Implementation::ofdm, Domain::TT, 2048, 1, 1);
    CHECK(ofdm.total_mults == 22528);

    const auto ft = pipeline_mults(Implementation::proposed_td, Domain::FT, 128, 16, 2);
    CHECK(ft.core_mults == 32768);
    CHECK(ft.precoding_mults == 14336);
    CHECK(ft.total_mults == 47104);
    CHECK(ft.total_per_symbol() == doctest::Approx(47104.0 / 2048.0));

    const auto tt = pipeline_mults(Implementation::proposed_td, Domain::TT, 1, 1200, 1);
    CHECK(tt.precoding_mults == 0);
    CHECK(tt.core_mults == 1200u * 1200u);

    // N log2 N + L (N + M log2 M)
    const auto ref = pipeline_mults(Implementation::reference_fd, Domain::FT, 128, 16, 3);
    CHECK(ref.total_mults == 2048u * 11 + 3u * (2048 + 16 * 4));
    CHECK(ref.modelled);
    CHECK_FALSE(ft.modelled);

    CHECK_THROWS_AS(pipeline_mults(Implementation::reference_fd, Domain::FT, 128, 16, 0), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_mults(Implementation::reference_fd, Domain::FT, 128, 16, 129), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_mults(Implementation::ofdm, Domain::TT, 1200, 1, 1), UnsupportedSizeError);
    CHECK(parse_implementation("reference_fd") == Implementation::reference_fd);
}

TEST_CASE("pure tone PSD") {
    const std::size_t nfft = 256, f0 = 37;
    std::mt19937_64 rng(1);
    BlockGenerator tone = [&](std::uint64_t b) {
        ComplexVector x(nfft);
        const double phase = static_cast<double>(b) * 0.7;
        for (std::size_t n = 0; n < nfft; ++n)
            x[n] = oracle::expj(2 * std::numbers::pi * static_cast<double>(f0 * n) / static_cast<double>(nfft) + phase);
        return x;
    };
    const auto psd = psd_welch(tone, nfft, 64, Window::hann);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < nfft; ++i)
        if (psd.power_db[i] > psd.power_db[peak]) peak = i;
    CHECK(peak == f0);
    // hann leaks only into the two neighbouring bins
    for (std::size_t i = 0; i < nfft; ++i)
        if (i + 1 < f0 || i > f0 + 1) CHECK(psd.power_db[i] < psd.power_db[f0] - 40.0);
    CHECK(psd.bin_freqs[f0] == doctest::Approx(37.0 / 256.0));
    CHECK(psd.bin_freqs[200] == doctest::Approx(200.0 / 256.0 - 1.0));
}

TEST_CASE("white noise PSD is flat") {
    const std::size_t nfft = 64;
    BlockGenerator noise = [&](std::uint64_t b) {
        std::mt19937_64 rng(1000 + b);
        return oracle::random_vector(nfft, rng);
    };
    const auto psd = psd_welch(noise, nfft, 4096, Window::rect);
    for (double p : psd.power_db) CHECK(std::abs(p) < 1.0);
}

TEST_CASE("rect-window OFDM skirts decay like a Dirichlet kernel") {
    // one active subcarrier, zero padding 8x: sidelobe peaks fall off monotonically
    const std::size_t N = 32, nfft = 256;
    BlockGenerator single = [&](std::uint64_t) {
        ComplexVector x(N);
        for (std::size_t n = 0; n < N; ++n) x[n] = oracle::expj(2 * std::numbers::pi * 4.0 * n / N);
        return x;
    };
    const auto psd = psd_welch(single, nfft, 8, Window::rect);
    const std::size_t centre = 4 * nfft / N;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t lobe = 1; lobe <= 3; ++lobe) {
        // sidelobe maxima near (lobe + 1/2) subcarrier spacings away
        const std::size_t bin = centre + (2 * lobe + 1) * (nfft / N) / 2;
        const double expected_db = 10 * std::log10(std::pow(std::sin(std::numbers::pi * (lobe + 0.5)) /
                                                                (N * std::sin(std::numbers::pi * (lobe + 0.5) / N)),
                                                            2)) +
                                   10 * std::log10(static_cast<double>(N));  // reference level is the mean bin power N
        CHECK(psd.power_db[bin] == doctest::Approx(expected_db).epsilon(1e-6));
        CHECK(psd.power_db[bin] < previous);
        previous = psd.power_db[bin];
    }
}

TEST_CASE("psd arguments") {
    BlockGenerator src = [](std::uint64_t) { return ComplexVector(8, 1.0); };
    CHECK_THROWS_AS(psd_welch(src, 8, 7, Window::rect), std::invalid_argument);
    CHECK_THROWS_AS(psd_welch(src, 4, 8, Window::rect), std::invalid_argument);
}

TEST_CASE("oob_db") {
    PsdEstimate flat;
    flat.power_db.assign(16, 0.0);
    flat.bin_freqs.assign(16, 0.0);
    CHECK(oob_db(flat, {{0, 8}}, {{8, 16}}) == doctest::Approx(0.0));

    PsdEstimate empty_oob = flat;
    for (std::size_t i = 8; i < 16; ++i) empty_oob.power_db[i] = -1000.0;
    CHECK(oob_db(empty_oob, {{0, 8}}, {{8, 16}}) == -200.0);

    CHECK_THROWS_AS(oob_db(flat, {{0, 9}}, {{8, 16}}), std::invalid_argument);
    CHECK_THROWS_AS(oob_db(flat, {}, {{8, 16}}), std::invalid_argument);
}

TEST_CASE("oob band layout") {
    const auto p = GfdmParams::with_active_counts(16, 2, 5, 2);
    const auto bands = gfdm_oob_bands(p, 128);
    CHECK(bands.inband_lo == doctest::Approx(-2.5 / 16));
    CHECK(bands.inband_hi == doctest::Approx(2.5 / 16));
    CHECK(bands.oob_edge_hi == doctest::Approx(3.5 / 16));
    std::size_t in = 0, out = 0;
    for (const auto& r : bands.inband) in += r.end - r.begin;
    for (const auto& r : bands.oob) out += r.end - r.begin;
    CHECK(in == 41);  // |f| <= 20/128
    CHECK(out == 128 - 57);  // |f| <= 28/128 excluded
    CHECK_THROWS_AS(gfdm_oob_bands(GfdmParams(16, 2), 128), std::invalid_argument);
}

TEST_CASE("papr") {
    CHECK(papr_db(ComplexVector{1, {0, 1}, -1, {0, -1}}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(papr_db(ComplexVector{1, 0, 0, 0}) == doctest::Approx(6.0206).epsilon(1e-4));
    CHECK_THROWS_AS(papr_db(ComplexVector(4)), std::invalid_argument);

    BlockGenerator src = [](std::uint64_t b) {
        ComplexVector x(4, 1.0);
        x[0] = b % 2 ? 3.0 : 1.0;  // alternating peaky and flat blocks
        return x;
    };
    const auto ccdf = papr_ccdf(src, 100, {-1.0, 1.0, 10.0});
    CHECK(ccdf.exceed_prob == std::vector<double>{1.0, 0.5, 0.0});
    CHECK_THROWS_AS(papr_ccdf(src, 10, {2.0, 1.0}), std::invalid_argument);

    std::vector<double> samples(100);
    for (std::size_t i = 0; i < 100; ++i) samples[i] = static_cast<double>(i);
    CHECK(papr_at_probability(samples, 0.01) == 98.0);
    CHECK(papr_at_probability(samples, 0.0) == 99.0);
}
