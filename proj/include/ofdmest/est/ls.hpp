// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

#include "ofdmest/num/types.hpp"

namespace ofdmest::est {

using num::cplx;
using num::CVec;

/// Elementwise least squares: h_k = Y_k / X_k.
inline CVec estimate_ls(const CVec& y, const CVec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("estimate_ls: length mismatch");
    CVec h(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (x[k] == cplx{}) throw std::invalid_argument("estimate_ls: zero pilot symbol");
        h[k] = y[k] / x[k];
    }
    return h;
}

} // namespace ofdmest::est
