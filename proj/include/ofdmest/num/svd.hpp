// SPDX-License-Identifier: Apache-2.0
//
// Thin complex SVD via one-sided Jacobi: orthogonalize column pairs of the
// working matrix, accumulate the rotations in V, read singular values off as
// column norms. Operates on A directly (not A^H A), so small singular values
// keep full accuracy.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ofdmest/num/types.hpp"

namespace ofdmest::num {

struct Svd {
    CMat u;                    // m x k, orthonormal columns
    std::vector<double> sigma; // k = min(m, n), descending, nonnegative
    CMat v;                    // n x k, orthonormal columns
};

namespace detail {

// One-sided Jacobi on X (m x n, m >= n); V accumulates the column rotations.
inline void jacobi_orthogonalize(CMat& x, CMat& v) {
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double a = 0.0, b = 0.0;
                cplx g = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    a += std::norm(x(i, p));
                    b += std::norm(x(i, q));
                    g += std::conj(x(i, p)) * x(i, q);
                }
                const double r = std::abs(g);
                if (r <= eps * std::sqrt(a * b) || r == 0.0) continue;
                rotated = true;
                const cplx phase = g / r;
                const double theta = (b - a) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = (t * c) * phase;
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx xp = x(i, p);
                    const cplx xq = x(i, q);
                    x(i, p) = c * xp - std::conj(s) * xq;
                    x(i, q) = s * xp + c * xq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vp = v(i, p);
                    const cplx vq = v(i, q);
                    v(i, p) = c * vp - std::conj(s) * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
}

// Fill U columns whose singular value vanished with an orthonormal
// completion so U always has orthonormal columns.
inline void complete_column(CMat& u, std::size_t col) {
    const std::size_t m = u.rows();
    for (std::size_t seed = 0; seed < m; ++seed) {
        CVec cand(m, cplx{});
        cand[seed] = 1.0;
        for (std::size_t j = 0; j < col; ++j) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += std::conj(u(i, j)) * cand[i];
            for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * u(i, j);
        }
        const double nn = vec_norm(cand);
        if (nn > 0.5) {
            for (std::size_t i = 0; i < m; ++i) u(i, col) = cand[i] / nn;
            return;
        }
    }
    throw std::runtime_error("svd: failed to complete orthonormal basis");
}

inline Svd svd_tall(const CMat& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    CMat x = a;
    CMat v = CMat::identity(n);
    jacobi_orthogonalize(x, v);

    std::vector<double> sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(x(i, j));
        sig[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

    Svd out;
    out.sigma.resize(n);
    out.u = CMat(m, n);
    out.v = CMat(n, n);
    const double smax = sig[order[0]];
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.sigma[k] = sig[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, src);
        if (sig[src] > smax * 1e-14 && sig[src] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, k) = x(i, src) / sig[src];
        } else {
            complete_column(out.u, k);
        }
    }
    return out;
}

} // namespace detail

/// Thin SVD A = U diag(sigma) V^H with sigma descending and both factors
/// carrying orthonormal columns.
inline Svd svd_decompose(const CMat& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (!all_finite(a)) throw std::invalid_argument("svd: non-finite input");
    if (a.rows() >= a.cols()) return detail::svd_tall(a);
    Svd t = detail::svd_tall(adjoint(a));
    Svd out;
    out.u = t.v;
    out.v = t.u;
    out.sigma = t.sigma;
    return out;
}

} // namespace ofdmest::num
