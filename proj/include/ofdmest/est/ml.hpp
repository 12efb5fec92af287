// SPDX-License-Identifier: Apache-2.0
//
// ML projection estimator: H_hat = P_{F_h} y, with F_h the first N_h columns
// of the unitary DFT matrix. Because those columns are orthonormal the
// projection is transform -> truncate to the first N_h time taps ->
// transform back, applied here through the FFT.

#pragma once

#include <stdexcept>

#include "ofdmest/num/dft.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using num::cplx;
using num::CVec;

class MlEstimator {
  public:
    MlEstimator(std::size_t n_subcarriers, std::size_t n_taps)
        : n_(n_subcarriers), n_taps_(n_taps) {
        if (n_taps < 1 || n_taps > n_subcarriers)
            throw std::invalid_argument("ml: n_taps must satisfy 1 <= N_h <= N");
    }

    CVec apply(const CVec& y) const {
        if (y.size() != n_) throw std::invalid_argument("ml: observation length");
        CVec t = num::idft(y);
        for (std::size_t i = n_taps_; i < n_; ++i) t[i] = cplx{};
        return num::dft(t);
    }

    std::size_t n_taps() const { return n_taps_; }

  private:
    std::size_t n_;
    std::size_t n_taps_;
};

inline CVec estimate_ml(const CVec& y_freq, std::size_t n_taps) {
    return MlEstimator(y_freq.size(), n_taps).apply(y_freq);
}

} // namespace ofdmest::est
