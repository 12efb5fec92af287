// SPDX-License-Identifier: Apache-2.0
//
// OFDM symbol chain: unitary IDFT plus cyclic prefix on the way out, guard
// removal plus unitary DFT on the way in. With the unitary pair the
// demodulated grid satisfies Y(k) = H(k) X(k) + W(k), where H(k) is the
// plain exponential-sum response sum_l h_l e^{-j2*pi*k*tau_l/N} of the taps
// (no 1/N factors on H).

#pragma once

#include <stdexcept>

#include "ofdmest/modem/frame.hpp"
#include "ofdmest/num/dft.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::modem {

/// Frequency row (length N) -> time row (length N + N_g): last N samples are
/// the unitary inverse DFT, first N_g replicate the tail.
inline CVec ofdm_modulate(const CVec& freq_row, const OfdmConfig& cfg) {
    if (freq_row.size() != cfg.n_subcarriers)
        throw std::invalid_argument("ofdm_modulate: row length != n_subcarriers");
    const CVec body = num::idft(freq_row);
    CVec out(cfg.n_subcarriers + cfg.cp_length);
    for (std::size_t i = 0; i < cfg.cp_length; ++i)
        out[i] = body[cfg.n_subcarriers - cfg.cp_length + i];
    for (std::size_t i = 0; i < cfg.n_subcarriers; ++i) out[cfg.cp_length + i] = body[i];
    return out;
}

/// Time row (length N + N_g) -> frequency row: drop the guard, forward DFT.
inline CVec ofdm_demodulate(const CVec& time_row, const OfdmConfig& cfg) {
    if (time_row.size() != cfg.n_subcarriers + cfg.cp_length)
        throw std::invalid_argument("ofdm_demodulate: row length != n_subcarriers + cp_length");
    CVec body(time_row.begin() + std::ptrdiff_t(cfg.cp_length), time_row.end());
    return num::dft(body);
}

} // namespace ofdmest::modem
