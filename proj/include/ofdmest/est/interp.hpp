// SPDX-License-Identifier: Apache-2.0
//
// Frequency interpolation for comb pilots. `Linear` is complex piecewise
// linear with a cyclic wrap past the last pilot; `Transform` inverse-
// transforms the pilot samples to N_p time taps, zero-pads to N and
// transforms back, which is exact whenever the channel has at most N_p taps.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ofdmest/num/dft.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using num::cplx;
using num::CVec;

enum class InterpMethod { Linear, Transform };

inline CVec interpolate_comb(const CVec& pilot_estimates,
                             const std::vector<std::size_t>& positions, std::size_t n,
                             InterpMethod method) {
    if (positions.size() != pilot_estimates.size() || positions.empty())
        throw std::invalid_argument("interpolate_comb: positions/estimates mismatch");
    if (positions.front() != 0)
        throw std::invalid_argument("interpolate_comb: positions must include 0");
    if (positions.size() == 1 || n % positions.size() != 0)
        throw std::invalid_argument("interpolate_comb: spacing must divide N");
    const std::size_t spacing = n / positions.size();
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (positions[i] != i * spacing)
            throw std::invalid_argument("interpolate_comb: non-uniform pilot spacing");

    const std::size_t np = positions.size();
    CVec out(n);
    switch (method) {
        case InterpMethod::Linear: {
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t seg = k / spacing;
                const std::size_t off = k % spacing;
                if (off == 0) {
                    out[k] = pilot_estimates[seg];
                    continue;
                }
                const cplx a = pilot_estimates[seg];
                const cplx b = pilot_estimates[(seg + 1) % np]; // cyclic tail wrap
                const double t = double(off) / double(spacing);
                out[k] = (1.0 - t) * a + t * b;
            }
            break;
        }
        case InterpMethod::Transform: {
            CVec taps = num::idft(pilot_estimates);
            CVec padded(n, cplx{});
            for (std::size_t i = 0; i < np; ++i) padded[i] = taps[i];
            out = num::dft(padded);
            const double scale = std::sqrt(double(n) / double(np));
            for (cplx& v : out) v *= scale;
            break;
        }
    }
    return out;
}

} // namespace ofdmest::est
