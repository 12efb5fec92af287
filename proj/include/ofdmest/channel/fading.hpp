// SPDX-License-Identifier: Apache-2.0
//
// Rayleigh fading with Jakes Doppler statistics, synthesized as a
// sum-of-sinusoids: each tap is (sigma_l/sqrt(Q)) * sum_q e^{j(2*pi*f_dT*n*
// cos(alpha_q) + phi_q)} with iid random phases per (seed, tap) and arrival
// angles on an equispaced grid with one random rotation,
// alpha_q = 2*pi*(q + u)/Q. The grid matters: it makes the per-realization
// time-averaged autocorrelation a Q-point midpoint quadrature of the Jakes
// integral, i.e. equal to sigma_l^2 * J0(2*pi*f_dT*m) up to the J_{2Q}
// aliasing term, so single realizations are ergodic in autocorrelation
// (fully random angles leave a 1/sqrt(Q) spread that no amount of symbols
// removes). Taps are quasi-static: constant within an OFDM symbol, updated
// between symbols, so Y(k) = H_k X(k) + W(k) holds per symbol with no ICI
// term.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ofdmest/channel/pdp.hpp"
#include "ofdmest/num/types.hpp"
#include "ofdmest/rng.hpp"

namespace ofdmest::channel {

using num::CMat;
using num::cplx;
using num::CVec;

struct FadingSpec {
    double doppler_rate = 0.01; // f_d * T, T = one OFDM symbol
    int n_oscillators = 32;
    std::uint64_t seed = 1;

    void validate() const {
        if (doppler_rate < 0.0) throw std::invalid_argument("doppler_rate must be >= 0");
        if (n_oscillators < 8) throw std::invalid_argument("n_oscillators must be >= 8");
    }
};

struct ChannelRealization {
    CMat tap_gains;     // n_symbols x n_taps, h_l(n)
    CMat freq_response; // n_symbols x N, H_k(n) = sum_l h_l(n) e^{-j2 pi k tau_l / N}
    PowerDelayProfile pdp;

    std::size_t n_symbols() const { return tap_gains.rows(); }
    std::size_t n_subcarriers() const { return freq_response.cols(); }

    CVec freq_row(std::size_t sym) const {
        CVec r(freq_response.cols());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = freq_response(sym, k);
        return r;
    }

    CVec tap_row(std::size_t sym) const {
        CVec r(tap_gains.cols());
        for (std::size_t l = 0; l < r.size(); ++l) r[l] = tap_gains(sym, l);
        return r;
    }
};

namespace detail {

inline void fill_freq_response(ChannelRealization& real, std::size_t n_subcarriers) {
    const std::size_t n_symbols = real.tap_gains.rows();
    const std::size_t n_taps = real.pdp.n_taps();
    CMat expo(n_subcarriers, n_taps);
    for (std::size_t k = 0; k < n_subcarriers; ++k)
        for (std::size_t l = 0; l < n_taps; ++l) {
            const double ang = -2.0 * num::kPi * double(k) *
                               double(real.pdp.taps[l].delay) / double(n_subcarriers);
            expo(k, l) = cplx(std::cos(ang), std::sin(ang));
        }
    real.freq_response = CMat(n_symbols, n_subcarriers);
    for (std::size_t s = 0; s < n_symbols; ++s)
        for (std::size_t k = 0; k < n_subcarriers; ++k) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < n_taps; ++l) acc += expo(k, l) * real.tap_gains(s, l);
            real.freq_response(s, k) = acc;
        }
}

} // namespace detail

/// Draw one fading realization. Deterministic in (pdp, spec, n_symbols, N).
inline ChannelRealization generate_fading(const PowerDelayProfile& pdp, const FadingSpec& spec,
                                          std::size_t n_symbols, std::size_t n_subcarriers) {
    pdp.validate();
    spec.validate();
    ChannelRealization real;
    real.pdp = pdp;
    real.tap_gains = CMat(n_symbols, pdp.n_taps());

    const std::size_t q = std::size_t(spec.n_oscillators);
    const double w_d = 2.0 * num::kPi * spec.doppler_rate;
    std::vector<double> omega(q), phase(q);
    for (std::size_t l = 0; l < pdp.n_taps(); ++l) {
        rng::SplitMix64 g(rng::derive(spec.seed, 0xFAD1u, l));
        // rotation is kept inside [0.2, 0.3]: at 0 or 0.5 the grid's mirror
        // pairs (cos theta = cos(2pi - theta)) collapse onto equal Doppler
        // frequencies and their cross terms never decay out of the time
        // average
        const double rotation = 0.2 + 0.1 * g.uniform();
        for (std::size_t i = 0; i < q; ++i) {
            const double angle = 2.0 * num::kPi * (double(i) + rotation) / double(q);
            omega[i] = w_d * std::cos(angle);
            phase[i] = 2.0 * num::kPi * g.uniform();
        }
        const double amp = std::sqrt(pdp.taps[l].power / double(q));
        for (std::size_t n = 0; n < n_symbols; ++n) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < q; ++i) {
                const double a = omega[i] * double(n) + phase[i];
                re += std::cos(a);
                im += std::sin(a);
            }
            real.tap_gains(n, l) = cplx(amp * re, amp * im);
        }
    }
    detail::fill_freq_response(real, n_subcarriers);
    return real;
}

/// Fixed-tap realization (test override / identity channel): the given tap
/// vector is held constant over all symbols.
inline ChannelRealization make_static_realization(const CVec& taps,
                                                  const std::vector<std::size_t>& delays,
                                                  std::size_t n_symbols,
                                                  std::size_t n_subcarriers) {
    if (taps.size() != delays.size() || taps.empty())
        throw std::invalid_argument("make_static_realization: taps/delays mismatch");
    ChannelRealization real;
    double psum = 0.0;
    for (const cplx& t : taps) psum += std::norm(t);
    for (std::size_t l = 0; l < taps.size(); ++l) {
        const double p = std::norm(taps[l]);
        real.pdp.taps.push_back({delays[l], p > 0.0 ? p / psum : 1e-12});
    }
    real.tap_gains = CMat(n_symbols, taps.size());
    for (std::size_t s = 0; s < n_symbols; ++s)
        for (std::size_t l = 0; l < taps.size(); ++l) real.tap_gains(s, l) = taps[l];
    detail::fill_freq_response(real, n_subcarriers);
    return real;
}

inline ChannelRealization make_identity_realization(std::size_t n_symbols,
                                                    std::size_t n_subcarriers) {
    return make_static_realization({cplx(1.0, 0.0)}, {0}, n_symbols, n_subcarriers);
}

/// sigma^2 = signal_power / 10^(snr_db / 10)
inline double snr_to_noise_var(double snr_db, double signal_power) {
    if (!(signal_power > 0.0)) throw std::invalid_argument("snr_to_noise_var: power must be > 0");
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

/// One OFDM symbol through the channel: linear convolution with the
/// symbol's taps, truncated to the input length, plus circular complex AWGN
/// of variance noise_var per sample. Requires every delay < N_g so the
/// cyclic prefix absorbs the full channel memory.
inline CVec apply_channel(const CVec& tx, const ChannelRealization& real,
                          std::size_t symbol_index, double noise_var,
                          std::uint64_t noise_seed) {
    const std::size_t n = real.n_subcarriers();
    if (tx.size() <= n) throw std::invalid_argument("apply_channel: tx must include a prefix");
    const std::size_t guard = tx.size() - n;
    if (real.pdp.max_delay() >= guard)
        throw std::invalid_argument("apply_channel: tap delay >= cyclic prefix length");
    if (symbol_index >= real.n_symbols())
        throw std::invalid_argument("apply_channel: symbol index out of range");

    CVec y(tx.size(), cplx{});
    for (std::size_t l = 0; l < real.pdp.n_taps(); ++l) {
        const cplx h = real.tap_gains(symbol_index, l);
        const std::size_t d = real.pdp.taps[l].delay;
        for (std::size_t t = d; t < tx.size(); ++t) y[t] += h * tx[t - d];
    }
    if (noise_var > 0.0) {
        rng::SplitMix64 g(noise_seed);
        const double s = std::sqrt(noise_var);
        for (cplx& v : y) v += s * g.randn_c();
    }
    return y;
}

/// Whole-stream variant used by the blind path and the leakage tests: the
/// convolution state carries across symbol boundaries, taps switch with the
/// symbol index (quasi-static).
inline CVec apply_channel_stream(const CVec& tx_stream, const ChannelRealization& real,
                                 std::size_t samples_per_symbol, double noise_var,
                                 std::uint64_t noise_seed) {
    CVec y(tx_stream.size(), cplx{});
    for (std::size_t t = 0; t < tx_stream.size(); ++t) {
        std::size_t sym = t / samples_per_symbol;
        if (sym >= real.n_symbols()) sym = real.n_symbols() - 1;
        cplx acc = 0.0;
        for (std::size_t l = 0; l < real.pdp.n_taps(); ++l) {
            const std::size_t d = real.pdp.taps[l].delay;
            if (d > t) continue;
            acc += real.tap_gains(sym, l) * tx_stream[t - d];
        }
        y[t] = acc;
    }
    if (noise_var > 0.0) {
        rng::SplitMix64 g(noise_seed);
        const double s = std::sqrt(noise_var);
        for (cplx& v : y) v += s * g.randn_c();
    }
    return y;
}

} // namespace ofdmest::channel
