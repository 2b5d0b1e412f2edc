#include "gfdm/fft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace gfdm::fft {

using cplx = std::complex<double>;

namespace {

std::vector<std::size_t> factorize(std::size_t n) {
    std::vector<std::size_t> factors;
    while (n % 4 == 0) {
        factors.push_back(4);
        n /= 4;
    }
    while (n % 2 == 0) {
        factors.push_back(2);
        n /= 2;
    }
    for (std::size_t p = 3; p * p <= n; p += 2) {
        while (n % p == 0) {
            factors.push_back(p);
            n /= p;
        }
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

struct Plan::Bluestein {
    std::size_t n;
    std::shared_ptr<const Plan> conv;  // power-of-two length
    std::vector<cplx> chirp;           // exp(-j pi k^2 / n)
    std::vector<cplx> kernel_spectrum;

    explicit Bluestein(std::size_t len) : n(len) {
        const std::size_t l = next_pow2(2 * n - 1);
        conv = plan_for(l);
        chirp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the phase argument small for large k.
            const std::size_t k2 = (k * k) % (2 * n);
            chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
        }
        std::vector<cplx> kernel(l, cplx{});
        kernel[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel[k] = std::conj(chirp[k]);
            kernel[l - k] = std::conj(chirp[k]);
        }
        kernel_spectrum.resize(l);
        conv->execute(kernel, kernel_spectrum, -1);
    }

    void forward(std::span<const cplx> in, std::span<cplx> out) const {
        const std::size_t l = conv->size();
        std::vector<cplx> a(l, cplx{});
        for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
        std::vector<cplx> spec(l);
        conv->execute(a, spec, -1);
        for (std::size_t k = 0; k < l; ++k) spec[k] *= kernel_spectrum[k];
        conv->execute(spec, a, +1);
        const double scale = 1.0 / static_cast<double>(l);
        for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k] * scale;
    }
};

Plan::Plan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("fft plan: length must be >= 1");
    factors_ = factorize(n);
    roots_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        roots_[i] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    if (!factors_.empty() && factors_.back() > kMaxDirectRadix) {
        bluestein_ = std::make_shared<const Bluestein>(n);
    }
}

cplx Plan::twiddle(std::size_t exponent, std::size_t n, int sign) const {
    const cplx w = roots_[(exponent % n) * (n_ / n)];
    return sign < 0 ? w : std::conj(w);
}

void Plan::recurse(const cplx* in, std::size_t stride, cplx* out, std::size_t n, std::size_t stage,
                   int sign) const {
    const std::size_t p = factors_[stage];
    const std::size_t m = n / p;
    if (m == 1) {
        for (std::size_t q = 0; q < p; ++q) out[q] = in[q * stride];
    } else {
        for (std::size_t r = 0; r < p; ++r) {
            recurse(in + r * stride, stride * p, out + r * m, m, stage + 1, sign);
        }
    }

    if (p == 2) {
        for (std::size_t k = 0; k < m; ++k) {
            const cplx a = out[k];
            const cplx b = out[k + m] * twiddle(k, n, sign);
            out[k] = a + b;
            out[k + m] = a - b;
        }
        return;
    }
    if (p == 4) {
        const cplx rot = sign < 0 ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        for (std::size_t k = 0; k < m; ++k) {
            const cplx a0 = out[k];
            const cplx a1 = out[k + m] * twiddle(k, n, sign);
            const cplx a2 = out[k + 2 * m] * twiddle(2 * k, n, sign);
            const cplx a3 = out[k + 3 * m] * twiddle(3 * k, n, sign);
            const cplx s02 = a0 + a2, d02 = a0 - a2;
            const cplx s13 = a1 + a3, d13 = (a1 - a3) * rot;
            out[k] = s02 + s13;
            out[k + m] = d02 + d13;
            out[k + 2 * m] = s02 - s13;
            out[k + 3 * m] = d02 - d13;
        }
        return;
    }

    std::vector<cplx> t(p);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t r = 0; r < p; ++r) t[r] = out[r * m + k] * twiddle(r * k, n, sign);
        for (std::size_t q = 0; q < p; ++q) {
            cplx acc = t[0];
            for (std::size_t r = 1; r < p; ++r) acc += t[r] * twiddle((r * q) % p * m, n, sign);
            out[q * m + k] = acc;
        }
    }
}

void Plan::execute(std::span<const cplx> in, std::span<cplx> out, int sign) const {
    if (in.size() != n_ || out.size() != n_) {
        throw std::invalid_argument("fft plan: buffer length does not match plan length");
    }
    if (n_ == 1) {
        out[0] = in[0];
        return;
    }
    if (bluestein_) {
        if (sign < 0) {
            bluestein_->forward(in, out);
        } else {
            std::vector<cplx> tmp(in.begin(), in.end());
            for (auto& v : tmp) v = std::conj(v);
            bluestein_->forward(tmp, out);
            for (auto& v : out) v = std::conj(v);
        }
        return;
    }
    if (in.data() == out.data()) {
        std::vector<cplx> tmp(in.begin(), in.end());
        recurse(tmp.data(), 1, out.data(), n_, 0, sign);
    } else {
        recurse(in.data(), 1, out.data(), n_, 0, sign);
    }
}

std::shared_ptr<const Plan> plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::unordered_map<std::size_t, std::shared_ptr<const Plan>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    // Built outside the lock: Bluestein plans request their own sub-plan.
    auto plan = std::make_shared<const Plan>(n);
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(plan)).first->second;
}

}  // namespace gfdm::fft
