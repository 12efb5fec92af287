// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suite: seeded random generators and the
// brute-force linear-algebra oracles the implementation is checked against.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ofdmest/num/types.hpp"

namespace testutil {

using ofdmest::num::CMat;
using ofdmest::num::cplx;
using ofdmest::num::CVec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cplx randn_c(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(g), n(g)};
}

inline CVec random_cvec(std::size_t n, std::mt19937_64& g) {
    CVec v(n);
    for (auto& x : v) x = randn_c(g);
    return v;
}

inline CMat random_cmat(std::size_t r, std::size_t c, std::mt19937_64& g) {
    CMat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = randn_c(g);
    return m;
}

inline CMat random_hermitian(std::size_t n, std::mt19937_64& g) {
    CMat a = random_cmat(n, n, g);
    CMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

inline CMat random_hpd(std::size_t n, std::mt19937_64& g) {
    CMat b = random_cmat(n, n, g);
    CMat a = ofdmest::num::matmul(ofdmest::num::adjoint(b), b);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5; // keep well away from singular
    return a;
}

// Direct-summation DFT oracle straight off the definition, unitary scale.
inline CVec dft_oracle(const CVec& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    CVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang =
                sign * 2.0 * ofdmest::num::kPi * double(k) * double(t) / double(n);
            acc += x[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc / std::sqrt(double(n));
    }
    return out;
}

// Truncated power series for J0: sum_{k<=terms} (-x^2/4)^k / (k!)^2.
inline double j0_series(double x, int terms = 30) {
    double term = 1.0;
    double acc = 1.0;
    const double q = -0.25 * x * x;
    for (int k = 1; k <= terms; ++k) {
        term *= q / (double(k) * double(k));
        acc += term;
    }
    return acc;
}

// Naive Gauss-Jordan inverse with partial pivoting; the dense brute-force
// route used wherever a test needs an independent linear-algebra oracle.
inline CMat naive_inverse(CMat a) {
    const std::size_t n = a.rows();
    CMat inv = CMat::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        }
        const cplx d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = a(r, col);
            if (f == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline double max_abs_diff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace testutil
