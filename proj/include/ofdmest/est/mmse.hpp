// SPDX-License-Identifier: Apache-2.0
//
// Full MMSE estimator: with Y = X H + W, H = E h and R_h = diag(sigma_l^2),
//   H_mmse = R_HH X^H (X R_HH X^H + sigma^2 I)^{-1} Y,  R_HH = E R_h E^H,
// which is the tap-domain chain R_hY R_YY^{-1} expressed on the subcarrier
// grid. The inverse goes through the Hermitian PSD pseudo-inverse so the
// noise-free case (rank-deficient R_YY) degrades to exact interpolation
// instead of failing.

#pragma once

#include <stdexcept>
#include <vector>

#include "ofdmest/est/common.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

class MmseEstimator {
  public:
    /// `subcarriers` are the observed positions (full band for block pilots,
    /// pilot comb otherwise); `x` the known symbols on those positions.
    MmseEstimator(const PowerDelayProfile& pdp, std::size_t n_subcarriers,
                  const std::vector<std::size_t>& subcarriers, const CVec& x, double noise_var) {
        if (x.size() != subcarriers.size())
            throw std::invalid_argument("mmse: symbol vector does not match positions");
        pdp.validate();
        if (noise_var < 0.0) throw std::invalid_argument("mmse: negative noise variance");
        const std::size_t m = subcarriers.size();
        const CMat r = correlation_from_pdp(pdp, subcarriers, n_subcarriers);

        // R_YY = X R X^H + sigma^2 I, R_HY = R X^H (X diagonal)
        CMat ryy(m, m), rhy(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                ryy(i, j) = x[i] * r(i, j) * std::conj(x[j]);
                rhy(i, j) = r(i, j) * std::conj(x[j]);
            }
        for (std::size_t i = 0; i < m; ++i) ryy(i, i) += noise_var;

        const num::EigH eg = num::eig_hermitian(ryy);
        double lmax = 0.0;
        for (double v : eg.values) lmax = std::max(lmax, v);
        if (!(lmax > 0.0)) throw SingularMatrixError("mmse: degenerate observation covariance");

        // W = R_HY * pinv(R_YY)
        CMat pinv(m, m);
        for (std::size_t k = 0; k < m; ++k) {
            if (eg.values[k] <= 1e-12 * lmax) continue;
            const double inv = 1.0 / eg.values[k];
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    pinv(i, j) += eg.vectors(i, k) * inv * std::conj(eg.vectors(j, k));
        }
        w_ = num::matmul(rhy, pinv);
    }

    /// Estimate of H on the observed positions.
    CVec apply(const CVec& y) const {
        if (y.size() != w_.rows()) throw std::invalid_argument("mmse: observation length");
        return num::matvec(w_, y);
    }

    const CMat& smoothing_matrix() const { return w_; }

  private:
    CMat w_;
};

/// One-shot full-band MMSE estimate (block-pilot use).
inline CVec estimate_mmse(const CVec& y, const CVec& x, const PowerDelayProfile& pdp,
                          double noise_var) {
    const std::size_t n = y.size();
    return MmseEstimator(pdp, n, all_subcarriers(n), x, noise_var).apply(y);
}

} // namespace ofdmest::est
