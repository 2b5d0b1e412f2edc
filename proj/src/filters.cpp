#include "gfdm/filters.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gfdm/errors.hpp"
#include "gfdm/linalg.hpp"
#include "gfdm/modem.hpp"

namespace gfdm {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-15) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

void normalize(ComplexVector& taps) {
    const double energy = norm2(taps);
    if (energy == 0.0) throw std::invalid_argument("make_prototype: pulse has zero energy");
    for (auto& t : taps) t /= energy;
}

}  // namespace

std::string_view to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::rc_time: return "rc_time";
        case FilterKind::rrc_time: return "rrc_time";
        case FilterKind::rect_td: return "rect_td";
        case FilterKind::dirichlet: return "dirichlet";
    }
    return "unknown";
}

std::string_view to_string(ReceiverMode mode) {
    switch (mode) {
        case ReceiverMode::MF: return "MF";
        case ReceiverMode::ZF: return "ZF";
        case ReceiverMode::MMSE: return "MMSE";
    }
    return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
    for (auto k : {FilterKind::rc_time, FilterKind::rrc_time, FilterKind::rect_td, FilterKind::dirichlet}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown filter kind '" + std::string(name) + "'");
}

ReceiverMode parse_receiver_mode(std::string_view name) {
    for (auto m : {ReceiverMode::MF, ReceiverMode::ZF, ReceiverMode::MMSE}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown receiver mode '" + std::string(name) + "'");
}

double raised_cosine(double t, double period, double rolloff) {
    const double x = t / period;
    const double d = 2.0 * rolloff * x;
    if (rolloff > 0.0 && std::abs(1.0 - d * d) < 1e-10) {
        return kPi / 4.0 * sinc(1.0 / (2.0 * rolloff));
    }
    return sinc(x) * std::cos(kPi * rolloff * x) / (1.0 - d * d);
}

double root_raised_cosine(double t, double period, double rolloff) {
    const double x = t / period;
    if (std::abs(x) < 1e-12) return 1.0 + rolloff * (4.0 / kPi - 1.0);
    if (rolloff > 0.0 && std::abs(std::abs(4.0 * rolloff * x) - 1.0) < 1e-10) {
        const double a = kPi / (4.0 * rolloff);
        return rolloff / std::sqrt(2.0) * ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
    }
    const double num = std::sin(kPi * x * (1.0 - rolloff)) + 4.0 * rolloff * x * std::cos(kPi * x * (1.0 + rolloff));
    const double den = kPi * x * (1.0 - (4.0 * rolloff * x) * (4.0 * rolloff * x));
    return num / den;
}

PrototypeFilter make_prototype(FilterKind kind, std::size_t K, std::size_t M, double rolloff) {
    if (K == 0 || M == 0) throw std::invalid_argument("make_prototype: K and M must be >= 1");
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
        throw std::invalid_argument("make_prototype: rolloff " + std::to_string(rolloff) + " outside [0, 1]");
    }
    const std::size_t n = K * M;
    PrototypeFilter g{kind, rolloff, K, M, ComplexVector(n, cplx{})};

    switch (kind) {
        case FilterKind::rc_time:
        case FilterKind::rrc_time: {
            const std::size_t half = n / 2;
            const auto period = static_cast<double>(K);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = i < n - half ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
                g.taps[i] = kind == FilterKind::rc_time ? raised_cosine(t, period, rolloff)
                                                        : root_raised_cosine(t, period, rolloff);
            }
            break;
        }
        case FilterKind::rect_td:
            for (std::size_t i = 0; i < K; ++i) g.taps[i] = 1.0;
            break;
        case FilterKind::dirichlet: {
            ComplexVector spectrum(n, cplx{});
            const auto lo = -static_cast<long long>(M / 2);
            for (long long f = lo; f < lo + static_cast<long long>(M); ++f) spectrum[wrap_index(f, n)] = 1.0;
            g.taps = idft(spectrum);
            break;
        }
    }
    normalize(g.taps);
    return g;
}

ReceiverFilter make_receiver(const PrototypeFilter& g, ReceiverMode mode, double noise_variance) {
    if (!(noise_variance >= 0.0)) {
        throw std::invalid_argument("make_receiver: noise_variance must be >= 0, got " + std::to_string(noise_variance));
    }
    if (g.taps.size() != g.N()) throw std::invalid_argument("make_receiver: prototype length does not match K*M");

    ReceiverFilter rx{mode, mode == ReceiverMode::MMSE ? noise_variance : 0.0, g.K, g.M, {}};
    if (mode == ReceiverMode::MF) {
        rx.taps = g.taps;
        return rx;
    }

    const ModulationMatrix mod = build_mod_matrix(g);
    if (mode == ReceiverMode::ZF || noise_variance == 0.0) {
        const double cond = modulation_condition_number(g.K, g.M, g.taps);
        if (!(cond < kMaxConditionNumber)) {
            std::ostringstream msg;
            msg << "make_receiver: modulation matrix is singular for " << to_string(g.kind) << " K=" << g.K
                << " M=" << g.M << " (condition number " << cond << ")";
            throw SingularMatrixError(msg.str(), cond);
        }
        // Row (0,0) of A^{-1} is gamma^H, i.e. A^H gamma = e_0.
        rx.taps = linalg::solve(mod.A.adjoint(), unit_vector(g.N(), 0));
        return rx;
    }

    // Row (0,0) of A^H (A A^H + s2 I)^{-1} is g^H C^{-1}; C is Hermitian, so gamma = C^{-1} g.
    ComplexMatrix c = linalg::product(mod.A, mod.A.adjoint());
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) += noise_variance;
    rx.taps = linalg::solve(c, g.taps);
    return rx;
}

}  // namespace gfdm
