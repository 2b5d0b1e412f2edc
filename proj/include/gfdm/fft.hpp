#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gfdm::fft {

/// Precomputed mixed-radix transform of one length. Lengths whose largest
/// prime factor exceeds kMaxDirectRadix go through Bluestein's chirp-z
/// algorithm on a power-of-two plan.
class Plan {
public:
    static constexpr std::size_t kMaxDirectRadix = 61;

    explicit Plan(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    const std::vector<std::size_t>& factors() const noexcept { return factors_; }
    bool uses_bluestein() const noexcept { return bluestein_ != nullptr; }

    /// Unnormalized transform; sign -1 is the forward (exp(-j...)) direction.
    void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
                 int sign) const;

private:
    struct Bluestein;

    void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
                 std::size_t n, std::size_t stage, int sign) const;
    std::complex<double> twiddle(std::size_t exponent, std::size_t n, int sign) const;

    std::size_t n_;
    std::vector<std::size_t> factors_;
    std::vector<std::complex<double>> roots_;  // exp(-j 2 pi i / n_)
    std::shared_ptr<const Bluestein> bluestein_;
};

/// Shared, thread-safe plan cache.
std::shared_ptr<const Plan> plan_for(std::size_t n);

}  // namespace gfdm::fft
