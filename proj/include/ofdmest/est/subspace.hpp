// SPDX-License-Identifier: Apache-2.0
//
// Blind subspace identification from second-order statistics of the raw
// received stream. Super-vectors stack N_blocks consecutive receiver blocks
// newest-first, with the oldest block truncated to its first K - L entries
// (K = M + P), so each super-vector r satisfies r = H W~ a + b with H the
// banded channel convolution matrix. The noise eigenvectors G of the
// averaged covariance R_r are orthogonal to the signal range; stacking the
// shifted copies of each G_k into xi_k turns that orthogonality into the
// small quadratic form Psi = sum_k xi_k W~W~^H xi_k^H whose minimal
// eigenvector is the channel, up to a complex scale.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ofdmest/errors.hpp"
#include "ofdmest/num/eig.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using num::CMat;
using num::cplx;
using num::CVec;

/// Intermediates of one identification run, kept inspectable: the averaged
/// super-vector covariance, its noise-subspace basis and the accumulated
/// quadratic form.
struct SubspaceWorkspace {
    std::size_t m_carriers = 0;  // M
    std::size_t prefix = 0;      // P
    std::size_t order_bound = 0; // L, channel has L+1 taps
    std::size_t n_blocks = 0;    // blocks stacked per super-vector
    CMat r_r;                    // (N_blocks*K - L)^2 covariance estimate
    CMat g_noise;                // noise eigenvectors, one per column
    CMat psi;                    // (L+1) x (L+1)

    std::size_t block_len() const { return m_carriers + prefix; } // K
    std::size_t stacked_len() const { return n_blocks * block_len() - order_bound; }
};

struct SubspaceResult {
    CVec taps;                   // length L+1, unit norm
    bool low_confidence = false; // smallest two eigenvalues of Psi nearly tied
};

/// Accumulate R_r, its noise subspace and Psi from super-vector windows at
/// the given sample offsets. Windows must be block-aligned.
inline SubspaceWorkspace build_subspace_workspace(const CVec& received, std::size_t m_carriers,
                                                  std::size_t prefix, std::size_t order_bound,
                                                  std::size_t n_blocks,
                                                  const std::vector<std::size_t>& window_starts) {
    const std::size_t m = m_carriers;
    const std::size_t p = prefix;
    const std::size_t l = order_bound;
    const std::size_t nb = n_blocks;
    if (m < 2 || p < 1 || nb < 1 || window_starts.empty())
        throw std::invalid_argument("subspace: degenerate geometry");
    if (l > p * nb)
        throw IdentifiabilityError("subspace: channel order exceeds prefix * blocks");
    const std::size_t k = m + p;
    const std::size_t window = nb * k;      // samples per super-vector window
    const std::size_t stacked = window - l; // super-vector length
    for (std::size_t start : window_starts)
        if (start + window > received.size())
            throw IdentifiabilityError("subspace: insufficient samples for the requested windows");

    SubspaceWorkspace ws;
    ws.m_carriers = m;
    ws.prefix = p;
    ws.order_bound = l;
    ws.n_blocks = nb;

    // R_r = mean over windows of r r^H, r stacked newest-first.
    ws.r_r = CMat(stacked, stacked);
    CVec r(stacked);
    for (std::size_t start : window_starts) {
        const std::size_t hi = start + window - 1;
        for (std::size_t i = 0; i < stacked; ++i) r[i] = received[hi - i];
        for (std::size_t i = 0; i < stacked; ++i)
            for (std::size_t j = 0; j < stacked; ++j) ws.r_r(i, j) += r[i] * std::conj(r[j]);
    }
    for (std::size_t i = 0; i < stacked; ++i)
        for (std::size_t j = 0; j < stacked; ++j) ws.r_r(i, j) /= double(window_starts.size());

    const num::EigH eg = num::eig_hermitian(ws.r_r);
    const std::size_t n_noise = p * nb - l; // ascending order: the first n_noise columns
    ws.g_noise = CMat(stacked, n_noise);
    for (std::size_t kv = 0; kv < n_noise; ++kv)
        for (std::size_t i = 0; i < stacked; ++i) ws.g_noise(i, kv) = eg.vectors(i, kv);

    // W~ W~^H = I_{N_blocks} (x) W W^H with W[i][m'] = e^{j2 pi m'(i-P)/M}.
    CMat wwh(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            cplx acc = 0.0;
            for (std::size_t mm = 0; mm < m; ++mm) {
                const double ang =
                    2.0 * num::kPi * double(mm) * (double(i) - double(j)) / double(m);
                acc += cplx(std::cos(ang), std::sin(ang));
            }
            wwh(i, j) = acc;
        }

    // Psi[d][e] = sum_k sum_{c,c'} G_k[c-d] wwh~[c][c'] conj(G_k[c'-e])
    const std::size_t taps = l + 1;
    ws.psi = CMat(taps, taps);
    for (std::size_t kv = 0; kv < n_noise; ++kv) {
        const CVec g = ws.g_noise.col(kv);
        CMat xw(taps, window); // xi_k * W~W~^H against the block-diagonal wwh~
        for (std::size_t d = 0; d < taps; ++d) {
            for (std::size_t c2 = 0; c2 < window; ++c2) {
                const std::size_t block = c2 / k;
                cplx acc = 0.0;
                for (std::size_t ci = 0; ci < k; ++ci) {
                    const std::size_t c = block * k + ci;
                    if (c < d) continue;
                    const std::size_t shift = c - d;
                    if (shift >= stacked) continue;
                    acc += g[shift] * wwh(ci, c2 % k);
                }
                xw(d, c2) = acc;
            }
        }
        for (std::size_t d = 0; d < taps; ++d)
            for (std::size_t e = 0; e < taps; ++e) {
                cplx acc = 0.0;
                for (std::size_t c2 = 0; c2 < window; ++c2) {
                    if (c2 < e) continue;
                    const std::size_t shift = c2 - e;
                    if (shift >= stacked) continue;
                    acc += xw(d, c2) * std::conj(g[shift]);
                }
                ws.psi(d, e) += acc;
            }
    }
    return ws;
}

/// Minimal eigenvector of Psi, unit norm. A near-tie between the two
/// smallest eigenvalues is reported as low confidence instead of guessed.
inline SubspaceResult solve_subspace_channel(const SubspaceWorkspace& ws) {
    const num::EigH pe = num::eig_hermitian(ws.psi);
    SubspaceResult out;
    out.taps = pe.vectors.col(0);
    double nn = num::vec_norm(out.taps);
    if (nn == 0.0) nn = 1.0;
    for (cplx& v : out.taps) v /= nn;
    const double lmax = std::abs(pe.values.back());
    if (ws.order_bound > 0 &&
        std::abs(pe.values[1] - pe.values[0]) < 1e-9 * (lmax > 0 ? lmax : 1.0))
        out.low_confidence = true;
    return out;
}

inline SubspaceResult subspace_identify_windows(const CVec& received, std::size_t m_carriers,
                                                std::size_t prefix, std::size_t order_bound,
                                                std::size_t n_blocks,
                                                const std::vector<std::size_t>& window_starts) {
    return solve_subspace_channel(build_subspace_workspace(received, m_carriers, prefix,
                                                           order_bound, n_blocks, window_starts));
}

/// `n_superblocks` non-overlapping consecutive windows from sample 0.
inline SubspaceResult subspace_identify(const CVec& received, std::size_t m_carriers,
                                        std::size_t prefix, std::size_t order_bound,
                                        std::size_t n_blocks, std::size_t n_superblocks) {
    if (n_superblocks < 1) throw std::invalid_argument("subspace: need at least one window");
    const std::size_t window = n_blocks * (m_carriers + prefix);
    std::vector<std::size_t> starts(n_superblocks);
    for (std::size_t w = 0; w < n_superblocks; ++w) starts[w] = w * window;
    return subspace_identify_windows(received, m_carriers, prefix, order_bound, n_blocks, starts);
}

/// Reference pilot pair used to undo the blind method's complex-scale
/// ambiguity: known (x, y) on subcarrier `carrier` of an M-carrier system.
struct PilotReference {
    cplx x;
    cplx y;
    std::size_t carrier = 0;
    std::size_t m_carriers = 8;
};

/// Scale the blind tap estimate so its implied frequency response matches
/// y/x at the reference subcarrier.
inline CVec resolve_scale_ambiguity(const CVec& h_hat, const PilotReference& ref) {
    if (h_hat.empty() || num::vec_norm(h_hat) == 0.0)
        throw std::invalid_argument("resolve_scale_ambiguity: zero estimate");
    if (ref.x == cplx{}) throw std::invalid_argument("resolve_scale_ambiguity: zero pilot");
    cplx implied = 0.0;
    for (std::size_t d = 0; d < h_hat.size(); ++d) {
        const double ang =
            -2.0 * num::kPi * double(ref.carrier) * double(d) / double(ref.m_carriers);
        implied += h_hat[d] * cplx(std::cos(ang), std::sin(ang));
    }
    if (std::abs(implied) < 1e-14)
        throw std::invalid_argument("resolve_scale_ambiguity: reference carrier in a null");
    const cplx c = (ref.y / ref.x) / implied;
    CVec out = h_hat;
    for (cplx& v : out) v *= c;
    return out;
}

} // namespace ofdmest::est
