// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "ofdmest/modem/constellation.hpp"
#include "ofdmest/modem/frame.hpp"
#include "ofdmest/modem/ofdm.hpp"
#include "test_util.hpp"

using namespace ofdmest::modem;
using ofdmest::num::cplx;
using ofdmest::num::CVec;
using testutil::max_abs_diff;

namespace {

BitVec random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    BitVec b(n);
    for (auto& x : b) x = std::uint8_t(g() & 1u);
    return b;
}

// Exhaustive nearest-point decision, the oracle the slicers must equal.
BitVec demap_nearest_oracle(const CVec& symbols, const Constellation& c) {
    BitVec out;
    for (const cplx& y : symbols) {
        std::size_t best = 0;
        double bestd = std::norm(y - c.points()[0]);
        for (std::size_t i = 1; i < c.points().size(); ++i) {
            const double d = std::norm(y - c.points()[i]);
            if (d < bestd) {
                bestd = d;
                best = i;
            }
        }
        for (int b = c.bits_per_symbol() - 1; b >= 0; --b)
            out.push_back(std::uint8_t((best >> b) & 1u));
    }
    return out;
}

} // namespace

TEST_CASE("constellations: unit average energy and point counts") {
    for (auto kind : {ConstellationKind::BPSK, ConstellationKind::QPSK, ConstellationKind::QAM16}) {
        const Constellation c(kind);
        REQUIRE(c.points().size() == (1u << c.bits_per_symbol()));
        double e = 0.0;
        for (const cplx& p : c.points()) e += std::norm(p);
        e /= double(c.points().size());
        REQUIRE(e == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("map_bits: pinned labelings") {
    const Constellation bpsk(ConstellationKind::BPSK);
    REQUIRE(map_bits({0}, bpsk)[0] == cplx(1, 0));
    REQUIRE(map_bits({1}, bpsk)[0] == cplx(-1, 0));

    const Constellation qpsk(ConstellationKind::QPSK);
    const double a = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(map_bits({0, 0}, qpsk)[0] - cplx(a, a)) < 1e-15);

    const Constellation qam(ConstellationKind::QAM16);
    const double s = 1.0 / std::sqrt(10.0);
    REQUIRE(std::abs(map_bits({0, 0, 0, 0}, qam)[0] - cplx(-3 * s, -3 * s)) < 1e-15);

    REQUIRE_THROWS_AS(map_bits({0, 1, 0}, qam), std::invalid_argument);
}

TEST_CASE("qam16: Gray property, all 24 nearest-neighbor pairs differ in one bit") {
    const Constellation qam(ConstellationKind::QAM16);
    const auto& pts = qam.points();
    const double dmin = 2.0 / std::sqrt(10.0);
    int pairs = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (std::abs(std::abs(pts[i] - pts[j]) - dmin) > 1e-9) continue;
            ++pairs;
            const unsigned x = unsigned(i) ^ unsigned(j);
            REQUIRE(__builtin_popcount(x) == 1);
        }
    }
    REQUIRE(pairs == 24);
}

TEST_CASE("demap: round trip for every label and slicer equals nearest-point oracle") {
    for (auto kind : {ConstellationKind::BPSK, ConstellationKind::QPSK, ConstellationKind::QAM16}) {
        const Constellation c(kind);
        BitVec all;
        for (std::size_t lab = 0; lab < c.points().size(); ++lab)
            for (int b = c.bits_per_symbol() - 1; b >= 0; --b)
                all.push_back(std::uint8_t((lab >> b) & 1u));
        REQUIRE(demap_symbols(map_bits(all, c), c) == all);
    }

    // slicer vs oracle on noisy random points
    auto g = testutil::rng(99);
    std::normal_distribution<double> n(0.0, 0.4);
    for (auto kind : {ConstellationKind::BPSK, ConstellationKind::QPSK, ConstellationKind::QAM16}) {
        const Constellation c(kind);
        CVec noisy(500);
        for (auto& y : noisy) {
            const cplx p = c.points()[g() % c.points().size()];
            y = p + cplx(n(g), n(g));
        }
        REQUIRE(demap_symbols(noisy, c) == demap_nearest_oracle(noisy, c));
    }
}

TEST_CASE("demap: BPSK sign decision and QAM16 noise recovery") {
    const Constellation bpsk(ConstellationKind::BPSK);
    REQUIRE(demap_symbols({cplx(0.3, 0.0)}, bpsk) == BitVec{0});

    const Constellation qam(ConstellationKind::QAM16);
    for (std::size_t lab = 0; lab < 16; ++lab) {
        const cplx noisy = qam.points()[lab] + cplx(0.05, 0.05);
        BitVec want;
        for (int b = 3; b >= 0; --b) want.push_back(std::uint8_t((lab >> b) & 1u));
        REQUIRE(demap_symbols({noisy}, qam) == want);
    }
}

TEST_CASE("beta: 17/9 for QAM16, 1 for unit-modulus constellations") {
    REQUIRE(Constellation(ConstellationKind::QAM16).beta() ==
            Approx(17.0 / 9.0).margin(1e-12));
    REQUIRE(Constellation(ConstellationKind::BPSK).beta() == Approx(1.0).margin(1e-12));
    REQUIRE(Constellation(ConstellationKind::QPSK).beta() == Approx(1.0).margin(1e-12));
}

TEST_CASE("assemble_frame: comb geometry") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 8;
    cfg.cp_length = 2;
    cfg.constellation = Constellation(ConstellationKind::QPSK);
    cfg.pilots = {PilotKind::Comb, 5, 4, cplx(1, 0)};
    const std::size_t n_symbols = 3;
    const Frame f = assemble_frame(random_bits(payload_bits_needed(cfg, n_symbols), 1), cfg, n_symbols);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n_symbols; ++s) {
        for (std::size_t k = 0; k < 8; ++k) {
            if (k == 0 || k == 4) {
                REQUIRE(f.pilot_mask[s][k]);
                REQUIRE(f.grid(s, k) == cplx(1, 0));
            } else {
                REQUIRE(!f.pilot_mask[s][k]);
            }
            count += f.pilot_mask[s][k] ? 1 : 0;
        }
    }
    // counting oracle: n_symbols * N / spacing
    REQUIRE(count == n_symbols * 8 / 4);
}

TEST_CASE("assemble_frame: block geometry and error paths") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 4;
    cfg.cp_length = 1;
    cfg.constellation = Constellation(ConstellationKind::BPSK);
    cfg.pilots = {PilotKind::Block, 2, 4, cplx(1, 0)};
    const Frame f = assemble_frame(random_bits(payload_bits_needed(cfg, 3), 2), cfg, 3);
    for (std::size_t k = 0; k < 4; ++k) {
        REQUIRE(f.pilot_mask[0][k]);
        REQUIRE(f.pilot_mask[2][k]);
        REQUIRE(!f.pilot_mask[1][k]);
    }

    REQUIRE_THROWS_AS(assemble_frame(BitVec{0}, cfg, 3), std::invalid_argument);

    OfdmConfig bad = cfg;
    bad.pilots = {PilotKind::Comb, 5, 3, cplx(1, 0)}; // 3 does not divide 4
    REQUIRE_THROWS_AS(assemble_frame(random_bits(64, 2), bad, 3), std::invalid_argument);
}

TEST_CASE("frame: payload round trip through data cells") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 16;
    cfg.cp_length = 4;
    cfg.constellation = Constellation(ConstellationKind::QAM16);
    cfg.pilots = {PilotKind::Comb, 5, 4, cplx(1, 0)};
    const BitVec bits = random_bits(payload_bits_needed(cfg, 5), 3);
    const Frame f = assemble_frame(bits, cfg, 5);
    const CVec data = extract_data_cells(f.grid, cfg);
    REQUIRE(demap_symbols(data, cfg.constellation) == bits);
}

TEST_CASE("ofdm_modulate: zero input, CP structure, length checks") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 8;
    cfg.cp_length = 3;
    const CVec zero(8, cplx{});
    const CVec t = ofdm_modulate(zero, cfg);
    REQUIRE(t.size() == 11);
    for (const cplx& v : t) REQUIRE(std::abs(v) == 0.0);

    auto g = testutil::rng(5);
    const CVec x = testutil::random_cvec(8, g);
    const CVec tx = ofdm_modulate(x, cfg);
    for (std::size_t i = 0; i < cfg.cp_length; ++i) REQUIRE(tx[i] == tx[8 + i]);

    REQUIRE_THROWS_AS(ofdm_modulate(CVec(7), cfg), std::invalid_argument);
    REQUIRE_THROWS_AS(ofdm_demodulate(CVec(10), cfg), std::invalid_argument);
}

TEST_CASE("ofdm: modulate/demodulate round trip and DC value") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 16;
    cfg.cp_length = 4;
    auto g = testutil::rng(6);
    const CVec x = testutil::random_cvec(16, g);
    REQUIRE(max_abs_diff(ofdm_demodulate(ofdm_modulate(x, cfg), cfg), x) < 1e-12);

    // constant time signal c -> spectrum [c*sqrt(N), 0, ...]
    const cplx c(0.7, -0.2);
    CVec t(16 + 4, c);
    const CVec spec = ofdm_demodulate(t, cfg);
    REQUIRE(std::abs(spec[0] - c * std::sqrt(16.0)) < 1e-12);
    for (std::size_t k = 1; k < 16; ++k) REQUIRE(std::abs(spec[k]) < 1e-12);
}

TEST_CASE("ofdm: circular delay shows as linear phase (DFT shift theorem oracle)") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 8;
    cfg.cp_length = 2;
    auto g = testutil::rng(8);
    const CVec x = testutil::random_cvec(8, g);
    CVec body = ofdmest::num::idft(x);
    CVec delayed(8);
    for (std::size_t i = 0; i < 8; ++i) delayed[i] = body[(i + 8 - 1) % 8];
    CVec t(10);
    for (std::size_t i = 0; i < 2; ++i) t[i] = delayed[6 + i];
    for (std::size_t i = 0; i < 8; ++i) t[2 + i] = delayed[i];
    const CVec spec = ofdm_demodulate(t, cfg);
    for (std::size_t k = 0; k < 8; ++k) {
        const double ang = -2.0 * ofdmest::num::kPi * double(k) / 8.0;
        const cplx want = x[k] * cplx(std::cos(ang), std::sin(ang));
        REQUIRE(std::abs(spec[k] - want) < 1e-12);
    }
}

TEST_CASE("end-to-end identity channel: bits -> frame -> ofdm -> demap for all constellations") {
    for (auto kind : {ConstellationKind::BPSK, ConstellationKind::QPSK, ConstellationKind::QAM16}) {
        OfdmConfig cfg;
        cfg.n_subcarriers = 32;
        cfg.cp_length = 8;
        cfg.constellation = Constellation(kind);
        cfg.pilots = {PilotKind::Comb, 5, 8, cplx(1, 0)};
        const BitVec bits = random_bits(payload_bits_needed(cfg, 4), 77 + int(kind));
        const Frame f = assemble_frame(bits, cfg, 4);
        CMat rxgrid(4, 32);
        for (std::size_t s = 0; s < 4; ++s) {
            CVec row(32);
            for (std::size_t k = 0; k < 32; ++k) row[k] = f.grid(s, k);
            const CVec y = ofdm_demodulate(ofdm_modulate(row, cfg), cfg);
            for (std::size_t k = 0; k < 32; ++k) rxgrid(s, k) = y[k];
        }
        REQUIRE(demap_symbols(extract_data_cells(rxgrid, cfg), cfg.constellation) == bits);
    }
}
