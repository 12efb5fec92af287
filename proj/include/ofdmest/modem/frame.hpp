// SPDX-License-Identifier: Apache-2.0
//
// Frame geometry: pilot grids and payload placement. Pilot cells always
// carry the fixed unit pilot value 1+0j; comb pilots are anchored at
// subcarrier 0 and the spacing must divide N.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofdmest/modem/constellation.hpp"
#include "ofdmest/num/types.hpp"

namespace ofdmest::modem {

using num::CMat;

enum class PilotKind { Block, Comb, None };

struct PilotScheme {
    PilotKind kind = PilotKind::Comb;
    int period = 5;   // block mode: pilot symbols at indices == 0 (mod period)
    int spacing = 4;  // comb mode: pilot subcarriers {0, spacing, 2*spacing, ...}
    cplx pilot_value = cplx(1.0, 0.0);
};

struct OfdmConfig {
    std::size_t n_subcarriers = 64; // power of two
    std::size_t cp_length = 16;     // 0 < cp < N
    Constellation constellation{ConstellationKind::QAM16};
    PilotScheme pilots;

    void validate() const {
        if (n_subcarriers == 0 || (n_subcarriers & (n_subcarriers - 1)) != 0)
            throw std::invalid_argument("n_subcarriers must be a power of two");
        if (cp_length == 0 || cp_length >= n_subcarriers)
            throw std::invalid_argument("cp_length must satisfy 0 < cp_length < n_subcarriers");
        if (pilots.kind == PilotKind::Block && pilots.period < 1)
            throw std::invalid_argument("pilot period must be >= 1");
        if (pilots.kind == PilotKind::Comb) {
            if (pilots.spacing < 2) throw std::invalid_argument("pilot spacing must be >= 2");
            if (n_subcarriers % std::size_t(pilots.spacing) != 0)
                throw std::invalid_argument("pilot spacing must divide n_subcarriers");
        }
        if (std::abs(std::abs(pilots.pilot_value) - 1.0) > 1e-12)
            throw std::invalid_argument("pilot value must have unit magnitude");
    }

    std::vector<std::size_t> comb_positions() const {
        std::vector<std::size_t> pos;
        for (std::size_t k = 0; k < n_subcarriers; k += std::size_t(pilots.spacing))
            pos.push_back(k);
        return pos;
    }

    bool is_pilot_symbol(std::size_t sym) const {
        return pilots.kind == PilotKind::Block && sym % std::size_t(pilots.period) == 0;
    }

    bool is_pilot_cell(std::size_t sym, std::size_t k) const {
        switch (pilots.kind) {
            case PilotKind::Block: return sym % std::size_t(pilots.period) == 0;
            case PilotKind::Comb: return k % std::size_t(pilots.spacing) == 0;
            case PilotKind::None: return false;
        }
        return false;
    }
};

/// Frequency-domain grid (symbols x N) with the pilot mask and the payload
/// that filled the data cells. Immutable after assembly.
struct Frame {
    CMat grid;                            // symbols x N
    std::vector<std::vector<bool>> pilot_mask;
    BitVec payload_bits;

    std::size_t n_symbols() const { return grid.rows(); }
};

/// Count of data (non-pilot) cells in an n_symbols frame.
inline std::size_t data_cell_count(const OfdmConfig& cfg, std::size_t n_symbols) {
    std::size_t cells = 0;
    for (std::size_t s = 0; s < n_symbols; ++s)
        for (std::size_t k = 0; k < cfg.n_subcarriers; ++k)
            if (!cfg.is_pilot_cell(s, k)) ++cells;
    return cells;
}

inline std::size_t payload_bits_needed(const OfdmConfig& cfg, std::size_t n_symbols) {
    return data_cell_count(cfg, n_symbols) * std::size_t(cfg.constellation.bits_per_symbol());
}

/// Build the pilot + data grid. Data cells are filled with mapped symbols in
/// row-major order (symbol by symbol, subcarrier by subcarrier).
inline Frame assemble_frame(const BitVec& bits, const OfdmConfig& cfg, std::size_t n_symbols) {
    cfg.validate();
    const std::size_t need = payload_bits_needed(cfg, n_symbols);
    if (bits.size() < need)
        throw std::invalid_argument("assemble_frame: insufficient payload bits (" +
                                    std::to_string(bits.size()) + " < " + std::to_string(need) +
                                    ")");
    Frame f;
    f.grid = CMat(n_symbols, cfg.n_subcarriers);
    f.pilot_mask.assign(n_symbols, std::vector<bool>(cfg.n_subcarriers, false));
    f.payload_bits.assign(bits.begin(), bits.begin() + std::ptrdiff_t(need));

    const CVec data = map_bits(f.payload_bits, cfg.constellation);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n_symbols; ++s) {
        for (std::size_t k = 0; k < cfg.n_subcarriers; ++k) {
            if (cfg.is_pilot_cell(s, k)) {
                f.grid(s, k) = cfg.pilots.pilot_value;
                f.pilot_mask[s][k] = true;
            } else {
                f.grid(s, k) = data[next++];
            }
        }
    }
    return f;
}

/// Inverse of the data placement in assemble_frame: collect data-cell
/// symbols row-major.
inline CVec extract_data_cells(const CMat& grid, const OfdmConfig& cfg) {
    CVec out;
    for (std::size_t s = 0; s < grid.rows(); ++s)
        for (std::size_t k = 0; k < cfg.n_subcarriers; ++k)
            if (!cfg.is_pilot_cell(s, k)) out.push_back(grid(s, k));
    return out;
}

} // namespace ofdmest::modem
