#pragma once

#include <map>
#include <mutex>

#include "beltrami/common.hpp"

namespace beltrami {

/// Radix-2 complex FFT. Grid sizes in this library are powers of two by
/// construction, so no other lengths are supported.
namespace fft_detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct Twiddles {
    std::vector<cd> fwd;   // exp(-2 pi i k / n)
    std::vector<cd> bwd;   // exp(+2 pi i k / n)
};

inline const Twiddles& twiddles(std::size_t n) {
    static std::map<std::size_t, Twiddles> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        Twiddles t;
        t.fwd.resize(n / 2);
        t.bwd.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
            t.fwd[k] = cd(std::cos(ang), std::sin(ang));
            t.bwd[k] = std::conj(t.fwd[k]);
        }
        it = cache.emplace(n, std::move(t)).first;
    }
    return it->second;
}

inline void transform(cd* a, std::size_t n, bool inverse) {
    if (!is_pow2(n)) throw ConfigError("fft: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const Twiddles& tw = twiddles(n);
    const std::vector<cd>& w = inverse ? tw.bwd : tw.fwd;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w[k * step];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace fft_detail

/// samples[k] = f(theta_k), theta_k = 2 pi k / n  ->  coefficients c_j with
/// f(theta) = sum_j c_j e^{i j theta}, bins j = 0..n-1 (j > n/2 aliases j - n).
inline void fft_forward(std::vector<cd>& data) {
    fft_detail::transform(data.data(), data.size(), false);
    double inv = 1.0 / static_cast<double>(data.size());
    for (cd& c : data) c *= inv;
}

inline void fft_inverse(std::vector<cd>& data) {
    fft_detail::transform(data.data(), data.size(), true);
}

}  // namespace beltrami
