// SPDX-License-Identifier: Apache-2.0
//
// Shared estimator types. The frequency-domain channel covariance is built
// analytically from the power-delay profile: R_HH = E diag(sigma_l^2) E^H
// with E[k][l] = e^{-j2*pi*k*tau_l/N}, the same exponential-sum convention
// the demodulated model Y(k) = H_k X(k) + W(k) uses, so diag(R_HH) = 1 for
// a unit-power profile and beta/SNR is the exact LS error variance for
// unit-modulus pilots.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ofdmest/channel/pdp.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using channel::PowerDelayProfile;
using num::CMat;
using num::cplx;
using num::CVec;

/// Per-subcarrier, per-symbol estimate grid produced by any method.
struct ChannelEstimate {
    CMat h_hat; // n_symbols x N
    std::string method;
    std::vector<bool> per_symbol_valid;
};

/// Channel autocovariance plus the SNR/beta pair the Wiener-style smoothers
/// need. `snr` is linear; `beta` is the constellation constant
/// E|x|^2 * E|1/x|^2 (17/9 for 16-QAM, 1 for unit-modulus alphabets).
struct FreqCorrelation {
    CMat r_hh;
    double snr = 1.0;
    double beta = 1.0;

    /// beta/SNR regularizer; 0 at infinite SNR.
    double ridge() const {
        if (std::isinf(snr)) return 0.0;
        return beta / snr;
    }
};

/// E[k][l] = e^{-j2*pi*subcarriers[k]*delays[l]/N}
inline CMat tap_exponentials(const std::vector<std::size_t>& subcarriers, std::size_t n,
                             const std::vector<std::size_t>& delays) {
    CMat e(subcarriers.size(), delays.size());
    for (std::size_t r = 0; r < subcarriers.size(); ++r)
        for (std::size_t l = 0; l < delays.size(); ++l) {
            const double ang =
                -2.0 * num::kPi * double(subcarriers[r]) * double(delays[l]) / double(n);
            e(r, l) = cplx(std::cos(ang), std::sin(ang));
        }
    return e;
}

inline std::vector<std::size_t> all_subcarriers(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

/// Analytic covariance of (H_k)_{k in subcarriers} for a given profile.
inline CMat correlation_from_pdp(const PowerDelayProfile& pdp,
                                 const std::vector<std::size_t>& subcarriers, std::size_t n) {
    std::vector<std::size_t> delays;
    for (const auto& t : pdp.taps) delays.push_back(t.delay);
    const CMat e = tap_exponentials(subcarriers, n, delays);
    CMat r(subcarriers.size(), subcarriers.size());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < delays.size(); ++l)
                acc += e(i, l) * pdp.taps[l].power * std::conj(e(j, l));
            r(i, j) = acc;
        }
    return r;
}

inline FreqCorrelation make_freq_correlation(const PowerDelayProfile& pdp,
                                             const std::vector<std::size_t>& subcarriers,
                                             std::size_t n, double snr_linear, double beta) {
    return FreqCorrelation{correlation_from_pdp(pdp, subcarriers, n), snr_linear, beta};
}

/// Empirical alternative to the analytic covariance: sample covariance of LS
/// estimates with the noise floor subtracted and negative eigenvalues
/// clipped (kept behind a config flag in the harness).
inline CMat empirical_correlation(const std::vector<CVec>& ls_samples, double noise_var) {
    if (ls_samples.empty()) throw std::invalid_argument("empirical_correlation: no samples");
    const std::size_t n = ls_samples[0].size();
    CMat r(n, n);
    for (const CVec& h : ls_samples)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r(i, j) += h[i] * std::conj(h[j]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) r(i, j) /= double(ls_samples.size());
        r(i, i) -= noise_var;
    }
    const num::EigH eg = num::eig_hermitian(r);
    CMat clipped(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eg.values[k] <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                clipped(i, j) += eg.vectors(i, k) * eg.values[k] * std::conj(eg.vectors(j, k));
    }
    return clipped;
}

} // namespace ofdmest::est
