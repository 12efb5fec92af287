// SPDX-License-Identifier: Apache-2.0
//
// Unitary DFT pair. One scaling convention for the whole library:
// forward multiplies by 1/sqrt(N) with kernel e^{-j2*pi*k*n/N}, inverse by
// 1/sqrt(N) with e^{+j2*pi*k*n/N}, so dft(dft(x, fwd), inv) == x and the
// transform preserves the 2-norm in both directions.

#pragma once

#include <cstddef>
#include <stdexcept>

#include "ofdmest/num/types.hpp"

namespace ofdmest::num {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place, no scaling.
inline void fft_pow2(CVec& x, bool inverse) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// O(N^2) direct evaluation for lengths that are not powers of two.
inline CVec dft_direct(const CVec& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    CVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * kPi * static_cast<double>(k) *
                               static_cast<double>(t) / static_cast<double>(n);
            acc += x[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace detail

/// Unitary DFT. `inverse == false` applies the e^{-j} kernel.
inline CVec dft(const CVec& x, bool inverse = false) {
    if (x.empty()) throw std::invalid_argument("dft: empty input");
    CVec out;
    if (detail::is_pow2(x.size())) {
        out = x;
        detail::fft_pow2(out, inverse);
    } else {
        out = detail::dft_direct(x, inverse);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (cplx& v : out) v *= scale;
    return out;
}

inline CVec idft(const CVec& x) { return dft(x, true); }

} // namespace ofdmest::num
