// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ofdmest::channel {

struct PdpTap {
    std::size_t delay = 0; // integer samples
    double power = 1.0;    // sigma_l^2
};

/// Tapped-delay-line power profile. Delays strictly increase, powers are
/// positive and sum to one.
struct PowerDelayProfile {
    std::vector<PdpTap> taps;

    std::size_t n_taps() const { return taps.size(); }

    std::size_t max_delay() const {
        std::size_t m = 0;
        for (const auto& t : taps) m = std::max(m, t.delay);
        return m;
    }

    void validate() const {
        if (taps.empty()) throw std::invalid_argument("pdp: no taps");
        double sum = 0.0;
        for (std::size_t i = 0; i < taps.size(); ++i) {
            if (taps[i].power <= 0.0) throw std::invalid_argument("pdp: tap power must be > 0");
            if (i > 0 && taps[i].delay <= taps[i - 1].delay)
                throw std::invalid_argument("pdp: delays must be strictly increasing");
            sum += taps[i].power;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("pdp: tap powers must sum to 1");
    }

    /// Exponential profile at delays 0..n-1, powers proportional to
    /// e^{-delay/decay}, normalized. Default 4 taps, decay 2.
    static PowerDelayProfile exponential(std::size_t n_taps = 4, double decay = 2.0) {
        PowerDelayProfile p;
        double sum = 0.0;
        for (std::size_t i = 0; i < n_taps; ++i) sum += std::exp(-double(i) / decay);
        for (std::size_t i = 0; i < n_taps; ++i)
            p.taps.push_back({i, std::exp(-double(i) / decay) / sum});
        return p;
    }

    static PowerDelayProfile single_tap() { return PowerDelayProfile{{{0, 1.0}}}; }
};

} // namespace ofdmest::channel
