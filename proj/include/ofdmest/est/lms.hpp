// SPDX-License-Identifier: Apache-2.0
//
// One-tap complex LMS per pilot subcarrier. The first estimate comes
// straight from LS; afterwards h <- h + mu * conj(x) * (y - h*x). Stable for
// mu * |x|^2 < 2.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using num::cplx;
using num::CVec;

class LmsTracker {
  public:
    explicit LmsTracker(double mu) : mu_(mu) {
        if (!(mu > 0.0)) throw std::invalid_argument("lms: step size must be > 0");
    }

    /// Force the internal state (test hook for the bare recursion).
    void reset(cplx h0) {
        h_ = h0;
        initialized_ = true;
    }

    /// Consume one (y, x) observation; returns the post-update estimate.
    cplx step(cplx y, cplx x) {
        if (!initialized_) {
            if (x == cplx{}) throw std::invalid_argument("lms: zero first pilot");
            h_ = y / x;
            initialized_ = true;
        } else {
            h_ += mu_ * std::conj(x) * (y - h_ * x);
        }
        return h_;
    }

    cplx estimate() const { return h_; }

  private:
    double mu_;
    cplx h_{};
    bool initialized_ = false;
};

/// Per-symbol estimate sequence over a pilot observation track:
/// out[0] = y0/x0, out[n] = out[n-1] + mu * conj(x_{n-1}) * (y_{n-1} -
/// out[n-1] * x_{n-1}).
inline CVec track_lms(const std::vector<std::pair<cplx, cplx>>& pilot_obs, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("track_lms: step size must be > 0");
    CVec out(pilot_obs.size());
    if (pilot_obs.empty()) return out;
    const auto& [y0, x0] = pilot_obs[0];
    if (x0 == cplx{}) throw std::invalid_argument("track_lms: zero first pilot");
    cplx h = y0 / x0;
    out[0] = h;
    for (std::size_t n = 1; n < pilot_obs.size(); ++n) {
        const auto& [y, x] = pilot_obs[n - 1];
        h += mu * std::conj(x) * (y - h * x);
        out[n] = h;
    }
    return out;
}

} // namespace ofdmest::est
