// SPDX-License-Identifier: Apache-2.0
//
// Simplified LMMSE smoother h <- R_HH (R_HH + (beta/SNR) I)^{-1} h_ls,
// realized through the eigenbasis of R_HH: delta_k = lambda_k /
// (lambda_k + beta/SNR). At infinite SNR the filter degrades to the
// projection onto the signal subspace (delta = 1 on nonzero modes), so the
// noise-free case stays exact for rank-deficient covariances.

#pragma once

#include <stdexcept>

#include "ofdmest/est/common.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

class LmmseSmoother {
  public:
    explicit LmmseSmoother(const FreqCorrelation& corr) {
        if (!(corr.snr > 0.0)) throw std::invalid_argument("lmmse: snr must be > 0");
        if (corr.beta < 1.0) throw std::invalid_argument("lmmse: beta must be >= 1");
        const num::EigH eg = num::eig_hermitian(corr.r_hh);
        const std::size_t n = corr.r_hh.rows();
        const double ridge = corr.ridge();
        double lmax = 0.0;
        for (double v : eg.values) lmax = std::max(lmax, v);
        w_ = CMat(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lam = eg.values[k];
            double delta;
            if (lam <= 1e-14 * lmax)
                delta = 0.0; // null mode: 0/0 at infinite SNR resolves to 0
            else
                delta = ridge > 0.0 ? lam / (lam + ridge) : 1.0;
            if (delta == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    w_(i, j) += eg.vectors(i, k) * delta * std::conj(eg.vectors(j, k));
        }
    }

    CVec apply(const CVec& h_ls) const {
        if (h_ls.size() != w_.rows()) throw std::invalid_argument("lmmse: length mismatch");
        return num::matvec(w_, h_ls);
    }

    const CMat& smoothing_matrix() const { return w_; }

  private:
    CMat w_;
};

inline CVec estimate_lmmse(const CVec& h_ls, const FreqCorrelation& corr) {
    return LmmseSmoother(corr).apply(h_ls);
}

} // namespace ofdmest::est
