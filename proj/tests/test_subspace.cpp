// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>

#include "ofdmest/est/subspace.hpp"
#include "ofdmest/modem/constellation.hpp"
#include "ofdmest/num/dft.hpp"
#include "ofdmest/rng.hpp"
#include "test_util.hpp"

using namespace ofdmest;
using namespace ofdmest::est;
using ofdmest::num::CMat;
using ofdmest::num::cplx;
using ofdmest::num::CVec;

namespace {

// Build the received stream of `n_blocks_total` CP-OFDM blocks (M carriers,
// prefix P) through a static FIR channel h, plus AWGN.
CVec blind_stream(const CVec& h, std::size_t m, std::size_t p, std::size_t n_blocks_total,
                  double noise_var, std::uint64_t seed) {
    const modem::Constellation qam(modem::ConstellationKind::QAM16);
    rng::SplitMix64 g(seed);
    CVec s;
    s.reserve(n_blocks_total * (m + p));
    for (std::size_t b = 0; b < n_blocks_total; ++b) {
        CVec a(m);
        for (auto& v : a) v = qam.points()[g.next() % 16];
        const CVec body = num::idft(a);
        for (std::size_t i = 0; i < p; ++i) s.push_back(body[m - p + i]);
        for (std::size_t i = 0; i < m; ++i) s.push_back(body[i]);
    }
    CVec r(s.size(), cplx{});
    for (std::size_t t = 0; t < s.size(); ++t) {
        for (std::size_t d = 0; d < h.size(); ++d) {
            if (d > t) continue;
            r[t] += h[d] * s[t - d];
        }
        if (noise_var > 0.0) r[t] += std::sqrt(noise_var) * g.randn_c();
    }
    return r;
}

double normalized_corr(const CVec& a, const CVec& b) {
    return std::abs(num::vdot(a, b)) / (num::vec_norm(a) * num::vec_norm(b));
}

} // namespace

TEST_CASE("subspace: noiseless recovery of a 2-tap channel") {
    const CVec h = {cplx(0.8, 0), cplx(0.6, 0)};
    const CVec rx = blind_stream(h, 8, 2, 2 * 400, 0.0, 271828);
    const SubspaceResult res = subspace_identify(rx, 8, 2, 1, 2, 400);
    REQUIRE(res.taps.size() == 2);
    REQUIRE(num::vec_norm(res.taps) == Approx(1.0).margin(1e-12));
    REQUIRE(normalized_corr(res.taps, h) > 0.999);
    REQUIRE(!res.low_confidence);
}

TEST_CASE("subspace: noiseless recovery with a complex 3-tap channel, L = 2") {
    const CVec h = {cplx(0.7, 0.2), cplx(-0.35, 0.4), cplx(0.2, -0.15)};
    const CVec rx = blind_stream(h, 8, 3, 2 * 600, 0.0, 99);
    const SubspaceResult res = subspace_identify(rx, 8, 3, 2, 2, 600);
    REQUIRE(normalized_corr(res.taps, h) > 0.995);
}

TEST_CASE("subspace: identifiability and sample-count gates") {
    const CVec rx(10 * 2 * 4, cplx(1, 0));
    REQUIRE_THROWS_AS(subspace_identify(rx, 8, 2, 5, 2, 2), ofdmest::IdentifiabilityError);
    REQUIRE_THROWS_AS(subspace_identify(rx, 8, 2, 1, 2, 400), ofdmest::IdentifiabilityError);
}

TEST_CASE("subspace: degenerate geometry flags low confidence") {
    // L = P * N_blocks leaves an empty noise subspace: Psi collapses and the
    // smallest eigenvalues tie, which must be reported rather than guessed
    const CVec h = {cplx(0.8, 0), cplx(0.6, 0)};
    const CVec rx = blind_stream(h, 8, 2, 2 * 60, 0.0, 7);
    const SubspaceResult res = subspace_identify(rx, 8, 2, 4, 2, 60);
    REQUIRE(res.low_confidence);
    REQUIRE(num::vec_norm(res.taps) == Approx(1.0).margin(1e-12));
}

TEST_CASE("subspace: noise eigenvectors are orthogonal to the true signal range") {
    const std::size_t m = 8, p = 2, l = 1, nb = 2;
    const std::size_t k = m + p, window = nb * k, stacked = window - l;
    const CVec h = {cplx(0.8, 0), cplx(0.6, 0)};
    const CVec rx = blind_stream(h, m, p, nb * 500, 0.0, 5);

    std::vector<std::size_t> starts;
    for (std::size_t w = 0; w < 500; ++w) starts.push_back(w * window);
    const SubspaceWorkspace ws = build_subspace_workspace(rx, m, p, l, nb, starts);
    REQUIRE(ws.stacked_len() == stacked);
    REQUIRE(num::hermitian_deviation(ws.r_r) < 1e-12);
    const num::EigH rr_eig = num::eig_hermitian(ws.r_r);
    REQUIRE(rr_eig.values.front() >= -1e-9 * rr_eig.values.back()); // PSD

    // A-hat = H W~ in the same (newest-first) stacking used by the identifier:
    // H[r][c] = h_{c-r}; W~ block-diagonal with the row-reversed W so block b
    // of the stacked input is [s_{K-1}, ..., s_0] = W_rev a.
    CMat toep(stacked, window);
    for (std::size_t row = 0; row < stacked; ++row)
        for (std::size_t d = 0; d < h.size(); ++d)
            if (row + d < window) toep(row, row + d) = h[d];
    CMat wrev(k, m);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t mm = 0; mm < m; ++mm) {
            const double ang =
                2.0 * num::kPi * double(mm) * (double(k - 1 - i) - double(p)) / double(m);
            wrev(i, mm) = cplx(std::cos(ang), std::sin(ang));
        }
    CMat wtilde(window, nb * m);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t mm = 0; mm < m; ++mm)
                wtilde(b * k + i, b * m + mm) = wrev(i, mm);
    const CMat a_hat = num::matmul(toep, wtilde);

    REQUIRE(ws.g_noise.cols() == p * nb - l);
    for (std::size_t kv = 0; kv < ws.g_noise.cols(); ++kv) {
        const CVec g = ws.g_noise.col(kv);
        CVec gha(a_hat.cols(), cplx{});
        for (std::size_t c = 0; c < a_hat.cols(); ++c) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < stacked; ++i) acc += std::conj(g[i]) * a_hat(i, c);
            gha[c] = acc;
        }
        REQUIRE(num::vec_norm(gha) <= 1e-6 * num::fro_norm(a_hat));
    }
}

TEST_CASE("subspace: 20 dB recovery stays accurate") {
    const CVec h = {cplx(0.8, 0), cplx(0.6, 0)};
    double worst = 1.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CVec rx = blind_stream(h, 8, 2, 2 * 400, 0.01, 1000 + seed);
        const SubspaceResult res = subspace_identify(rx, 8, 2, 1, 2, 400);
        worst = std::min(worst, normalized_corr(res.taps, h));
    }
    REQUIRE(worst > 0.97);
}

TEST_CASE("resolve_scale_ambiguity: rotation and scale removal") {
    const CVec h = {cplx(0.8, 0), cplx(0.6, 0)};
    const std::size_t m = 8, carrier = 1;
    cplx response = 0.0;
    for (std::size_t d = 0; d < h.size(); ++d) {
        const double ang = -2.0 * num::kPi * double(carrier) * double(d) / double(m);
        response += h[d] * cplx(std::cos(ang), std::sin(ang));
    }
    const cplx x(0.7, -0.7);
    const PilotReference ref{x, x * response, carrier, m};

    // already-correct estimate: scale factor 1
    const CVec same = resolve_scale_ambiguity(h, ref);
    REQUIRE(testutil::max_abs_diff(same, h) < 1e-10);

    // pure rotation j
    CVec rot(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rot[i] = cplx(0, 1) * h[i];
    REQUIRE(testutil::max_abs_diff(resolve_scale_ambiguity(rot, ref), h) < 1e-10);

    // scale 0.5 e^{j pi/3}
    const cplx c = 0.5 * cplx(std::cos(num::kPi / 3), std::sin(num::kPi / 3));
    CVec scaled(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) scaled[i] = c * h[i];
    REQUIRE(testutil::max_abs_diff(resolve_scale_ambiguity(scaled, ref), h) < 1e-10);

    REQUIRE_THROWS_AS(resolve_scale_ambiguity(CVec(2, cplx{}), ref), std::invalid_argument);
}

TEST_CASE("subspace: end-to-end with scale resolution reproduces the response") {
    const CVec h = {cplx(0.6, 0.3), cplx(0.5, -0.4)};
    const double nn = num::vec_norm(h);
    CVec hn(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hn[i] = h[i] / nn;

    const CVec rx = blind_stream(hn, 8, 2, 2 * 500, 0.0, 31415);
    const SubspaceResult res = subspace_identify(rx, 8, 2, 1, 2, 500);
    REQUIRE(normalized_corr(res.taps, hn) > 0.999);

    cplx response = 0.0;
    for (std::size_t d = 0; d < hn.size(); ++d) {
        const double ang = -2.0 * num::kPi * 2.0 * double(d) / 8.0;
        response += hn[d] * cplx(std::cos(ang), std::sin(ang));
    }
    const PilotReference ref{cplx(1, 0), response, 2, 8};
    const CVec fixed = resolve_scale_ambiguity(res.taps, ref);
    REQUIRE(testutil::max_abs_diff(fixed, hn) < 1e-3);
}
