// SPDX-License-Identifier: Apache-2.0
//
// Rank-p reduction of the LMMSE smoother: SVD R_HH = U Lambda U^H, keep the
// p dominant modes with gains delta_k = lambda_k / (lambda_k + beta/SNR),
// zero the rest.

#pragma once

#include <stdexcept>
#include <vector>

#include "ofdmest/est/common.hpp"
#include "ofdmest/num/svd.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

class LowRankEstimator {
  public:
    LowRankEstimator(const FreqCorrelation& corr, std::size_t rank) {
        const std::size_t n = corr.r_hh.rows();
        if (rank < 1 || rank > n)
            throw std::invalid_argument("lowrank: rank must satisfy 1 <= p <= N");
        if (!(corr.snr > 0.0)) throw std::invalid_argument("lowrank: snr must be > 0");
        const num::Svd sv = num::svd_decompose(corr.r_hh); // PSD: singular = eigen, descending
        const double ridge = corr.ridge();
        const double lmax = sv.sigma.empty() ? 0.0 : sv.sigma[0];
        basis_ = CMat(n, rank);
        gains_.resize(rank);
        for (std::size_t k = 0; k < rank; ++k) {
            const double lam = sv.sigma[k];
            if (lam <= 1e-14 * lmax)
                gains_[k] = 0.0;
            else
                gains_[k] = ridge > 0.0 ? lam / (lam + ridge) : 1.0;
            for (std::size_t i = 0; i < n; ++i) basis_(i, k) = sv.u(i, k);
        }
    }

    CVec apply(const CVec& h_ls) const {
        if (h_ls.size() != basis_.rows()) throw std::invalid_argument("lowrank: length mismatch");
        CVec out(h_ls.size(), cplx{});
        for (std::size_t k = 0; k < gains_.size(); ++k) {
            if (gains_[k] == 0.0) continue;
            cplx proj = 0.0;
            for (std::size_t i = 0; i < h_ls.size(); ++i)
                proj += std::conj(basis_(i, k)) * h_ls[i];
            proj *= gains_[k];
            for (std::size_t i = 0; i < h_ls.size(); ++i) out[i] += basis_(i, k) * proj;
        }
        return out;
    }

  private:
    CMat basis_;
    std::vector<double> gains_;
};

inline CVec estimate_lowrank(const CVec& h_ls, const FreqCorrelation& corr, std::size_t rank) {
    return LowRankEstimator(corr, rank).apply(h_ls);
}

} // namespace ofdmest::est
