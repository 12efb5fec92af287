// SPDX-License-Identifier: Apache-2.0
//
// Bit <-> symbol maps. Labeling is fixed once so bit error rates are
// reproducible: BPSK 0 -> +1, 1 -> -1; QPSK and 16-QAM are Gray-coded with
// the I axis taken from the first half of the bit group and the Q axis from
// the second, PAM levels {-3,-1,+1,+3}/sqrt(10) for 16-QAM. Every
// constellation has unit average symbol energy.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofdmest/num/types.hpp"

namespace ofdmest::modem {

using num::cplx;
using num::CVec;

enum class ConstellationKind { BPSK, QPSK, QAM16 };

using BitVec = std::vector<std::uint8_t>;

namespace detail {

// 2-bit Gray label -> PAM4 level (unnormalized): 00->-3, 01->-1, 11->+1, 10->+3.
inline double gray2_to_pam4(unsigned b0, unsigned b1) {
    static constexpr double lut[4] = {-3.0, -1.0, +1.0, +3.0}; // index by gray rank
    const unsigned idx = (b0 << 1) | b1;
    switch (idx) {
        case 0b00: return lut[0];
        case 0b01: return lut[1];
        case 0b11: return lut[2];
        default: return lut[3]; // 0b10
    }
}

// Inverse of gray2_to_pam4 via threshold slicing at {-2, 0, +2}.
inline void pam4_to_gray2(double x, std::uint8_t& b0, std::uint8_t& b1) {
    if (x < -2.0) {
        b0 = 0; b1 = 0;
    } else if (x < 0.0) {
        b0 = 0; b1 = 1;
    } else if (x < 2.0) {
        b0 = 1; b1 = 1;
    } else {
        b0 = 1; b1 = 0;
    }
}

} // namespace detail

class Constellation {
  public:
    explicit Constellation(ConstellationKind kind) : kind_(kind) {
        switch (kind) {
            case ConstellationKind::BPSK:
                bits_per_symbol_ = 1;
                points_ = {cplx(1, 0), cplx(-1, 0)};
                break;
            case ConstellationKind::QPSK: {
                bits_per_symbol_ = 2;
                const double a = 1.0 / std::sqrt(2.0);
                points_.resize(4);
                for (unsigned i = 0; i < 4; ++i) {
                    const double re = ((i >> 1) & 1u) ? -a : a;
                    const double im = (i & 1u) ? -a : a;
                    points_[i] = cplx(re, im);
                }
                break;
            }
            case ConstellationKind::QAM16: {
                bits_per_symbol_ = 4;
                const double s = 1.0 / std::sqrt(10.0);
                points_.resize(16);
                for (unsigned i = 0; i < 16; ++i) {
                    const double re =
                        detail::gray2_to_pam4((i >> 3) & 1u, (i >> 2) & 1u) * s;
                    const double im =
                        detail::gray2_to_pam4((i >> 1) & 1u, i & 1u) * s;
                    points_[i] = cplx(re, im);
                }
                break;
            }
        }
    }

    ConstellationKind kind() const { return kind_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const CVec& points() const { return points_; }

    /// Label index (bits packed MSB-first) -> point.
    cplx point(unsigned label) const { return points_[label]; }

    std::string name() const {
        switch (kind_) {
            case ConstellationKind::BPSK: return "bpsk";
            case ConstellationKind::QPSK: return "qpsk";
            default: return "qam16";
        }
    }

    /// beta = E|x|^2 * E|1/x|^2 by direct expectation over the points.
    double beta() const {
        double e2 = 0.0, einv2 = 0.0;
        for (const cplx& p : points_) {
            e2 += std::norm(p);
            einv2 += 1.0 / std::norm(p);
        }
        e2 /= double(points_.size());
        einv2 /= double(points_.size());
        return e2 * einv2;
    }

  private:
    ConstellationKind kind_;
    int bits_per_symbol_ = 0;
    CVec points_;
};

/// Group bits (MSB-first per symbol) into constellation points.
inline CVec map_bits(const BitVec& bits, const Constellation& c) {
    const int bps = c.bits_per_symbol();
    if (bits.size() % std::size_t(bps) != 0)
        throw std::invalid_argument("map_bits: bit count not divisible by bits_per_symbol");
    CVec out(bits.size() / std::size_t(bps));
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
        out[s] = c.point(label);
    }
    return out;
}

/// Minimum-Euclidean-distance decision per symbol, inverted to bits.
/// Slicers are exact nearest-neighbor rules for these rectangular grids.
inline BitVec demap_symbols(const CVec& symbols, const Constellation& c) {
    BitVec out;
    out.reserve(symbols.size() * std::size_t(c.bits_per_symbol()));
    switch (c.kind()) {
        case ConstellationKind::BPSK:
            for (const cplx& y : symbols) out.push_back(y.real() < 0.0 ? 1 : 0);
            break;
        case ConstellationKind::QPSK:
            for (const cplx& y : symbols) {
                out.push_back(y.real() < 0.0 ? 1 : 0);
                out.push_back(y.imag() < 0.0 ? 1 : 0);
            }
            break;
        case ConstellationKind::QAM16: {
            const double s = std::sqrt(10.0);
            for (const cplx& y : symbols) {
                std::uint8_t b0, b1, b2, b3;
                detail::pam4_to_gray2(y.real() * s, b0, b1);
                detail::pam4_to_gray2(y.imag() * s, b2, b3);
                out.push_back(b0);
                out.push_back(b1);
                out.push_back(b2);
                out.push_back(b3);
            }
            break;
        }
    }
    return out;
}

} // namespace ofdmest::modem
