// SPDX-License-Identifier: Apache-2.0
//
// Kalman channel trackers over the AR state model
//   x[n] = C x[n-1] + G v[n],     y[n] = D[n] x[n] + w[n]
// with the standard predict/update cycle
//   M = C S C^H + GG^H, Gamma = D M D^H + sigma_w^2 I,
//   K = M D^H Gamma^{-1}, x = Cx + K(y - DCx), S = (I - KD) M.
// The vector tracker stacks all N subcarriers (AR order 1); the scalar
// tracker runs one p-dimensional filter per subcarrier with coefficients
// shared across subcarriers. Both modes run the same core, so they coincide
// bit-for-bit when the dimensions collapse (N = 1, p = 1). The covariance is
// re-Hermitized after every step.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "ofdmest/channel/ar.hpp"
#include "ofdmest/errors.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using channel::ArModel;
using num::CMat;
using num::cplx;
using num::CVec;

enum class KalmanMode { Vector, Scalar };

struct KalmanState {
    KalmanMode mode = KalmanMode::Scalar;
    CVec x;     // stacked state (N vector-mode with p = 1, p scalar-mode)
    CMat sigma; // error covariance, Hermitian PSD
    CMat c;     // state transition
    CMat ggh;   // process noise covariance
    ArModel model;
    // diagnostics from the most recent step
    CVec last_innovation;
    std::vector<double> last_gamma_diag;
};

/// Scalar-mode initial state: companion-form C from the shared AR fit,
/// stationary covariance Toeplitz(correlation) as Sigma_0, x[0] = 0.
inline KalmanState make_scalar_kalman(const ArModel& model,
                                      const std::function<double(int)>& correlation) {
    if (model.vector_mode) throw std::invalid_argument("make_scalar_kalman: vector model");
    const std::size_t p = std::size_t(model.order);
    KalmanState st;
    st.mode = KalmanMode::Scalar;
    st.model = model;
    st.x.assign(p, cplx{});
    st.sigma = CMat(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            st.sigma(i, j) = correlation(std::abs(int(i) - int(j)));
    st.c = CMat(p, p);
    for (std::size_t j = 0; j < p; ++j) st.c(0, j) = -model.coeffs[j];
    for (std::size_t i = 1; i < p; ++i) st.c(i, i - 1) = 1.0;
    st.ggh = CMat(p, p);
    st.ggh(0, 0) = model.innovation_sigma2;
    return st;
}

/// Vector-mode initial state (AR order 1 across the whole subcarrier
/// stack): C = -A1, Sigma_0 = R(0), x[0] = 0.
inline KalmanState make_vector_kalman(const ArModel& model, const CMat& r0) {
    if (!model.vector_mode) throw std::invalid_argument("make_vector_kalman: scalar model");
    const std::size_t n = model.A1.rows();
    if (r0.rows() != n || r0.cols() != n)
        throw std::invalid_argument("make_vector_kalman: covariance dimension");
    KalmanState st;
    st.mode = KalmanMode::Vector;
    st.model = model;
    st.x.assign(n, cplx{});
    st.sigma = r0;
    st.c = num::scaled(model.A1, -1.0);
    st.ggh = model.noise_cov;
    return st;
}

namespace detail {

// One predict/update cycle; d is the observation matrix (m x dim).
inline CVec kalman_core(KalmanState& st, const CMat& d, const CVec& y, double noise_var) {
    const std::size_t dim = st.x.size();
    const std::size_t m = y.size();

    const CMat mpred =
        num::add(num::matmul(st.c, num::matmul(st.sigma, num::adjoint(st.c))), st.ggh);
    CMat gamma = num::matmul(d, num::matmul(mpred, num::adjoint(d)));
    for (std::size_t i = 0; i < m; ++i) gamma(i, i) += noise_var;

    const num::EigH eg = num::eig_hermitian(gamma);
    double lmax = 0.0;
    for (double v : eg.values) lmax = std::max(lmax, v);
    if (!(lmax > 0.0))
        throw SingularMatrixError("kalman: innovation covariance not positive");
    CMat gamma_pinv(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        if (eg.values[k] <= 1e-13 * lmax) continue;
        const double inv = 1.0 / eg.values[k];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                gamma_pinv(i, j) += eg.vectors(i, k) * inv * std::conj(eg.vectors(j, k));
    }
    const CMat gain = num::matmul(num::matmul(mpred, num::adjoint(d)), gamma_pinv);

    const CVec x_pred = num::matvec(st.c, st.x);
    CVec innov = y;
    const CVec dxp = num::matvec(d, x_pred);
    for (std::size_t i = 0; i < m; ++i) innov[i] -= dxp[i];

    const CVec corr = num::matvec(gain, innov);
    st.x = x_pred;
    for (std::size_t i = 0; i < dim; ++i) st.x[i] += corr[i];

    CMat ikd = CMat::identity(dim);
    const CMat kd = num::matmul(gain, d);
    ikd = num::sub(ikd, kd);
    CMat sig = num::matmul(ikd, mpred);
    for (std::size_t i = 0; i < dim; ++i) {
        sig(i, i) = cplx(sig(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const cplx v = 0.5 * (sig(i, j) + std::conj(sig(j, i)));
            sig(i, j) = v;
            sig(j, i) = std::conj(v);
        }
    }
    st.sigma = sig;

    st.last_innovation = innov;
    st.last_gamma_diag.resize(m);
    for (std::size_t i = 0; i < m; ++i) st.last_gamma_diag[i] = gamma(i, i).real();
    return st.x;
}

} // namespace detail

/// Vector tracker step: y and the diagonal symbol matrix S (given as the
/// symbol vector) cover all N subcarriers. Returns the estimate of H[n].
inline CVec kalman_step_vector(KalmanState& st, const CVec& y, const CVec& symbols,
                               double noise_var) {
    if (st.mode != KalmanMode::Vector) throw std::invalid_argument("kalman: not a vector state");
    const std::size_t n = st.x.size();
    if (y.size() != n || symbols.size() != n)
        throw std::invalid_argument("kalman_step_vector: dimension mismatch");
    CMat d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = symbols[i];
    const CVec x = detail::kalman_core(st, d, y, noise_var);
    return x; // order 1: the state is H[n] itself
}

/// Scalar tracker step for one subcarrier: d = [s, 0, ..., 0].
/// Returns the estimate of H_k[n] = x[0].
inline cplx kalman_step_scalar(KalmanState& st, cplx y, cplx symbol, double noise_var) {
    if (st.mode != KalmanMode::Scalar) throw std::invalid_argument("kalman: not a scalar state");
    CMat d(1, st.x.size());
    d(0, 0) = symbol;
    const CVec x = detail::kalman_core(st, d, CVec{y}, noise_var);
    return x[0];
}

} // namespace ofdmest::est
