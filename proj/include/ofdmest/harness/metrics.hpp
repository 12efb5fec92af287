// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

#include "ofdmest/est/common.hpp"
#include "ofdmest/modem/constellation.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::harness {

using modem::BitVec;

/// Mismatch count / length.
inline double compute_ber(const BitVec& tx_bits, const BitVec& rx_bits) {
    if (tx_bits.size() != rx_bits.size() || tx_bits.empty())
        throw std::invalid_argument("compute_ber: length mismatch or empty");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        if (tx_bits[i] != rx_bits[i]) ++errors;
    return double(errors) / double(tx_bits.size());
}

/// Normalized MSE over the estimate's valid symbols:
/// sum |h_hat - H|^2 / sum |H|^2.
inline double compute_mse(const est::ChannelEstimate& h_hat, const num::CMat& h_true) {
    if (h_hat.h_hat.rows() != h_true.rows() || h_hat.h_hat.cols() != h_true.cols())
        throw std::invalid_argument("compute_mse: dimension mismatch");
    double err = 0.0, power = 0.0;
    for (std::size_t s = 0; s < h_true.rows(); ++s) {
        if (s < h_hat.per_symbol_valid.size() && !h_hat.per_symbol_valid[s]) continue;
        for (std::size_t k = 0; k < h_true.cols(); ++k) {
            err += std::norm(h_hat.h_hat(s, k) - h_true(s, k));
            power += std::norm(h_true(s, k));
        }
    }
    if (power == 0.0) throw std::invalid_argument("compute_mse: all-zero truth grid");
    return err / power;
}

inline double compute_rmse(double mse) {
    if (mse < 0.0) throw std::invalid_argument("compute_rmse: negative input");
    return std::sqrt(mse);
}

} // namespace ofdmest::harness
