#pragma once

// Transmit prototype filters g and receive windows gamma.

#include <cstddef>
#include <string>
#include <string_view>

#include "gfdm/numerics.hpp"

namespace gfdm {

enum class FilterKind { rc_time, rrc_time, rect_td, dirichlet };
enum class ReceiverMode { MF, ZF, MMSE };

std::string_view to_string(FilterKind kind);
std::string_view to_string(ReceiverMode mode);
/// Throws std::invalid_argument for unknown names.
FilterKind parse_filter_kind(std::string_view name);
ReceiverMode parse_receiver_mode(std::string_view name);

/// Length-N (N = K*M) unit-energy circular pulse shared by all subcarriers.
struct PrototypeFilter {
    FilterKind kind = FilterKind::rect_td;
    double rolloff = 0.0;
    std::size_t K = 1;
    std::size_t M = 1;
    ComplexVector taps;

    std::size_t N() const noexcept { return K * M; }
};

struct ReceiverFilter {
    ReceiverMode mode = ReceiverMode::MF;
    double noise_variance = 0.0;
    std::size_t K = 1;
    std::size_t M = 1;
    ComplexVector taps;

    std::size_t N() const noexcept { return K * M; }
};

/// Condition-number limit above which ZF filter synthesis refuses to invert.
inline constexpr double kMaxConditionNumber = 1e10;

/// rc_time/rrc_time: (root-)raised-cosine with symbol period K samples, peak at
/// index 0, circularly wrapped over N samples. rect_td: constant on [0, K).
/// dirichlet: inverse DFT of the M DC-centred bins. Result has unit energy.
PrototypeFilter make_prototype(FilterKind kind, std::size_t K, std::size_t M, double rolloff);

/// Textbook pulses in continuous time t (units of samples), symbol period T.
double raised_cosine(double t, double period, double rolloff);
double root_raised_cosine(double t, double period, double rolloff);

/// MF: gamma = g. ZF: dual window, gamma = (A^H)^{-1} e_0, so the Gabor receiver
/// built from gamma is A^{-1}. MMSE: gamma = (A A^H + s2 I)^{-1} g, giving
/// A^H (A A^H + s2 I)^{-1}. Dense O(N^3) solve.
///
/// Throws SingularMatrixError (ZF, or MMSE with zero noise variance) when
/// cond(A) >= kMaxConditionNumber, and std::invalid_argument for a negative
/// noise variance.
ReceiverFilter make_receiver(const PrototypeFilter& g, ReceiverMode mode, double noise_variance = 0.0);

}  // namespace gfdm
