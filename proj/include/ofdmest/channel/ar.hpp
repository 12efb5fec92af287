// SPDX-License-Identifier: Apache-2.0
//
// Autoregressive fading-dynamics models fitted by Yule-Walker. Sign
// convention follows the state model H(n) = -sum_i a_i H(n-i) + sigma u(n),
// so for correlation r(m) = 0.9^m and p = 1 the fit is a_1 = -0.9.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ofdmest/errors.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/svd.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::channel {

using num::CMat;
using num::cplx;
using num::CVec;

struct ArModel {
    int order = 1;
    std::vector<cplx> coeffs;        // scalar mode, a_1..a_p
    double innovation_sigma2 = 0.0;  // scalar mode, sigma^2
    bool vector_mode = false;
    CMat A1;        // vector mode (order 1): h[n] = -A1 h[n-1] + ...
    CMat noise_cov; // vector mode innovation covariance Q Q^H
};

/// Scalar Yule-Walker fit of order p against a real correlation function.
/// `diagonal_loading` is added to the Toeplitz diagonal (used near
/// doppler 0, where the system degenerates).
inline ArModel fit_ar_yule_walker(const std::function<double(int)>& correlation, int order,
                                  double diagonal_loading = 0.0) {
    if (order < 1) throw std::invalid_argument("fit_ar_yule_walker: order must be >= 1");
    if (!(correlation(0) > 0.0))
        throw std::invalid_argument("fit_ar_yule_walker: correlation(0) must be > 0");

    const std::size_t p = std::size_t(order);
    CMat toe(p, p);
    CVec rhs(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            toe(i, j) = correlation(int(i) - int(j));
            if (i == j) toe(i, j) += diagonal_loading;
        }
        rhs[i] = correlation(int(i) + 1);
    }
    CVec phi;
    try {
        phi = num::hermitian_solve(toe, rhs);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("fit_ar_yule_walker: singular Toeplitz system");
    }

    ArModel m;
    m.order = order;
    m.coeffs.resize(p);
    double sig2 = correlation(0) + diagonal_loading;
    for (std::size_t i = 0; i < p; ++i) {
        m.coeffs[i] = -phi[i];
        sig2 -= (phi[i] * correlation(int(i) + 1)).real();
    }
    m.innovation_sigma2 = sig2 > 0.0 ? sig2 : 0.0;
    return m;
}

/// Vector AR(1) via the block Yule-Walker solve: regression matrix
/// Phi = R(1) R(0)^+, A1 = -Phi, innovation covariance R(0) - Phi R(0) Phi^H.
/// Higher vector orders are not supported.
inline ArModel fit_vector_ar(const CMat& r0, const CMat& r1, int order = 1) {
    if (order != 1)
        throw std::invalid_argument("fit_vector_ar: only order 1 is supported in vector mode");
    const std::size_t n = r0.rows();
    if (r0.cols() != n || r1.rows() != n || r1.cols() != n)
        throw std::invalid_argument("fit_vector_ar: dimension mismatch");

    const num::EigH eg = num::eig_hermitian(r0);
    // Phi^H column-by-column: R(0) Phi^H = R(1)^H, rank-deficient R(0) handled
    // through the PSD pseudo-inverse.
    const CMat r1h = num::adjoint(r1);
    CMat phih(n, n);
    for (std::size_t j = 0; j < n; ++j)
        phih.set_col(j, num::hermitian_psd_pinv_apply(eg, r1h.col(j)));
    const CMat phi = num::adjoint(phih);

    ArModel m;
    m.order = 1;
    m.vector_mode = true;
    m.A1 = num::scaled(phi, -1.0);
    m.noise_cov = num::sub(r0, num::matmul(phi, num::matmul(r0, num::adjoint(phi))));
    return m;
}

/// Minimum-phase (stability) check. Scalar mode runs the step-down
/// recursion: the model is stable iff every reflection coefficient has
/// magnitude < 1. Vector mode uses the sufficient spectral-norm bound.
inline bool is_stable(const ArModel& m) {
    if (m.vector_mode) {
        const num::Svd s = num::svd_decompose(m.A1);
        return s.sigma.empty() || s.sigma[0] < 1.0 + 1e-12;
    }
    std::vector<cplx> phi(m.coeffs.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = -m.coeffs[i];
    for (std::size_t p = phi.size(); p > 0; --p) {
        const cplx k = phi[p - 1];
        if (std::abs(k) >= 1.0) return false;
        const double den = 1.0 - std::norm(k);
        std::vector<cplx> prev(p - 1);
        for (std::size_t i = 0; i + 1 < p; ++i)
            prev[i] = (phi[i] + k * std::conj(phi[p - 2 - i])) / den;
        phi = std::move(prev);
    }
    return true;
}

} // namespace ofdmest::channel
