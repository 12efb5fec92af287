// SPDX-License-Identifier: Apache-2.0
//
// Hermitian eigendecomposition (cyclic complex Jacobi) and the solvers built
// on top of it. Jacobi is quadratic-convergent and backward stable, which is
// all that is needed at the matrix sizes this library works with.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ofdmest/errors.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::num {

struct EigH {
    std::vector<double> values; // ascending
    CMat vectors;               // column i pairs with values[i], unit norm
};

/// Eigendecomposition of a Hermitian matrix. Input Hermiticity is validated
/// (||A - A^H|| <= 1e-10 * ||A||); eigenvalues are returned ascending.
inline EigH eig_hermitian(const CMat& a_in) {
    if (a_in.rows() != a_in.cols()) throw std::invalid_argument("eig_hermitian: not square");
    if (!all_finite(a_in)) throw std::invalid_argument("eig_hermitian: non-finite input");
    if (hermitian_deviation(a_in) > 1e-10)
        throw std::invalid_argument("eig_hermitian: input is not Hermitian");

    const std::size_t n = a_in.rows();
    CMat a = a_in;
    // Exact-Hermitian working copy so roundoff in the input cannot drift.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }
    CMat v = CMat::identity(n);

    const double anorm = fro_norm(a);
    const double tol = 1e-14 * (anorm > 0.0 ? anorm : 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= tol / static_cast<double>(n)) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = apq / r; // e^{j*arg(apq)}
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = (t * c) * phase;

                // A <- J^H A J with J = [[c, s], [-conj(s), c]] on (p, q).
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(s) * aiq;
                    a(i, q) = s * aip + c * aiq;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
                a(p, p) = cplx(app - t * r, 0.0);
                a(q, q) = cplx(aqq + t * r, 0.0);
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - std::conj(s) * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigH out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

namespace detail {

// x = V f(lambda) V^H b with f = 1/lambda (no thresholding).
inline CVec eig_apply_inverse(const EigH& eg, const CVec& b) {
    const std::size_t n = b.size();
    CVec y(n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(eg.vectors(i, k)) * b[i];
        proj /= eg.values[k];
        for (std::size_t i = 0; i < n; ++i) y[i] += eg.vectors(i, k) * proj;
    }
    return y;
}

// Residual b - A*x accumulated in extended precision.
inline CVec residual_ld(const CMat& a, const CVec& x, const CVec& b) {
    const std::size_t n = b.size();
    CVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double re = b[i].real();
        long double im = b[i].imag();
        for (std::size_t j = 0; j < n; ++j) {
            const cplx p = a(i, j) * x[j];
            re -= static_cast<long double>(p.real());
            im -= static_cast<long double>(p.imag());
        }
        r[i] = cplx(static_cast<double>(re), static_cast<double>(im));
    }
    return r;
}

} // namespace detail

inline constexpr double kSolveConditionLimit = 1e8;

/// Solve A x = b for Hermitian A. Rejects singular or ill-conditioned
/// systems (condition estimate above 1e8) with SingularMatrixError.
/// Two refinement passes with extended-precision residuals keep
/// ||Ax - b|| <= 1e-9 * ||b|| over the supported condition range.
inline CVec hermitian_solve(const CMat& a, const CVec& b) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_solve: not square");
    if (a.rows() != b.size()) throw std::invalid_argument("hermitian_solve: dimension mismatch");
    const EigH eg = eig_hermitian(a);
    double amax = 0.0, amin = std::numeric_limits<double>::infinity();
    for (double lam : eg.values) {
        amax = std::max(amax, std::abs(lam));
        amin = std::min(amin, std::abs(lam));
    }
    if (amin == 0.0 || amax / amin > kSolveConditionLimit)
        throw SingularMatrixError("hermitian_solve: matrix singular or condition above 1e8");

    CVec x = detail::eig_apply_inverse(eg, b);
    for (int pass = 0; pass < 2; ++pass) {
        const CVec r = detail::residual_ld(a, x, b);
        const CVec dx = detail::eig_apply_inverse(eg, r);
        for (std::size_t i = 0; i < b.size(); ++i) x[i] += dx[i];
    }
    return x;
}

/// x = A^+ b for Hermitian PSD A: eigenvalues <= rel_tol * lambda_max are
/// treated as exact zeros. Used where rank deficiency is legitimate
/// (noise-free covariances).
inline CVec hermitian_psd_pinv_apply(const EigH& eg, const CVec& b, double rel_tol = 1e-12) {
    const std::size_t n = b.size();
    double lmax = 0.0;
    for (double lam : eg.values) lmax = std::max(lmax, std::abs(lam));
    const double cut = rel_tol * lmax;
    CVec y(n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
        if (!(eg.values[k] > cut)) continue;
        cplx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(eg.vectors(i, k)) * b[i];
        proj /= eg.values[k];
        for (std::size_t i = 0; i < n; ++i) y[i] += eg.vectors(i, k) * proj;
    }
    return y;
}

/// Hermitian PSD square root factor G with G G^H = A (eigenvalue clamp at 0).
inline CMat hermitian_psd_sqrt(const CMat& a) {
    const EigH eg = eig_hermitian(a);
    const std::size_t n = a.rows();
    CMat g(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = eg.values[k] > 0.0 ? std::sqrt(eg.values[k]) : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g(i, j) += eg.vectors(i, k) * lam * std::conj(eg.vectors(j, k));
    }
    return g;
}

} // namespace ofdmest::num
