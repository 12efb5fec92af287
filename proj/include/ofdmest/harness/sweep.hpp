// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo sweep engine. Per (snr, trial) a payload, a fading realization
// and a noise stream are derived deterministically from the master seed, the
// frame runs modulate -> channel -> demodulate once, and every configured
// method estimates the channel from the same received grid, equalizes the
// data cells (zero-forcing Y/H per subcarrier, holding the last valid
// estimate) and demaps. Trials fan out to worker threads; accumulation runs
// afterwards in trial order, so results are byte-identical for any worker
// count.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ofdmest/channel/ar.hpp"
#include "ofdmest/channel/fading.hpp"
#include "ofdmest/est/common.hpp"
#include "ofdmest/est/interp.hpp"
#include "ofdmest/est/kalman.hpp"
#include "ofdmest/est/lmmse.hpp"
#include "ofdmest/est/lowrank.hpp"
#include "ofdmest/est/lms.hpp"
#include "ofdmest/est/ls.hpp"
#include "ofdmest/est/ml.hpp"
#include "ofdmest/est/mmse.hpp"
#include "ofdmest/est/subspace.hpp"
#include "ofdmest/harness/metrics.hpp"
#include "ofdmest/modem/frame.hpp"
#include "ofdmest/modem/ofdm.hpp"
#include "ofdmest/num/bessel.hpp"
#include "ofdmest/rng.hpp"

namespace ofdmest::harness {

using modem::BitVec;
using num::CMat;
using num::cplx;
using num::CVec;

enum class Method {
    Perfect,
    Ls,
    Lms,
    Mmse,
    Lmmse,
    LowRank,
    Ml,
    KalmanScalar,
    KalmanVector,
    Subspace,
};

inline std::string method_name(Method m) {
    switch (m) {
        case Method::Perfect: return "perfect";
        case Method::Ls: return "ls";
        case Method::Lms: return "lms";
        case Method::Mmse: return "mmse";
        case Method::Lmmse: return "lmmse";
        case Method::LowRank: return "lowrank";
        case Method::Ml: return "ml";
        case Method::KalmanScalar: return "kalman";
        case Method::KalmanVector: return "kalman_vector";
        case Method::Subspace: return "subspace";
    }
    return "?";
}

inline std::optional<Method> method_from_name(const std::string& s) {
    for (Method m : {Method::Perfect, Method::Ls, Method::Lms, Method::Mmse, Method::Lmmse,
                     Method::LowRank, Method::Ml, Method::KalmanScalar, Method::KalmanVector,
                     Method::Subspace})
        if (method_name(m) == s) return m;
    return std::nullopt;
}

struct MethodSpec {
    Method method = Method::Ls;
    std::size_t rank = 4;                                   // lowrank
    std::size_t ml_taps = 16;                               // ml: N_h
    int ar_order = 2;                                       // kalman (scalar)
    bool decision_feedback = false;                         // kalman symbol source
    double lms_step = 0.1;                                  // lms mu
    est::InterpMethod interp = est::InterpMethod::Linear;   // comb interpolation
    std::size_t sub_blocks = 2;                             // subspace N_blocks
    std::size_t sub_superblocks = 400;                      // subspace windows
    std::size_t sub_order = 1;                              // subspace L

    std::string name() const { return method_name(method); }
};

struct ChannelConfig {
    enum class Type { Fading, Identity } type = Type::Fading;
    channel::PowerDelayProfile pdp = channel::PowerDelayProfile::exponential();
    double doppler_rate = 0.01; // f_d * T
    int n_oscillators = 32;
    bool empirical_correlation = false; // sample covariance instead of analytic R
    std::size_t corr_train_symbols = 200;

    channel::PowerDelayProfile effective_pdp() const {
        return type == Type::Identity ? channel::PowerDelayProfile::single_tap() : pdp;
    }
    double effective_doppler() const { return type == Type::Identity ? 0.0 : doppler_rate; }
};

struct SweepConfig {
    modem::OfdmConfig ofdm;
    ChannelConfig channel;
    std::vector<MethodSpec> methods;
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    std::size_t n_trials = 500;
    std::size_t n_symbols_per_trial = 100;
    std::uint64_t master_seed = 1;
    bool noiseless = false;
    std::vector<std::string> metrics = {"ber", "mse", "rmse"};
    std::size_t n_workers = 0; // 0 = hardware concurrency

    void validate() const;
};

struct MetricRecord {
    double snr_db = 0.0;
    std::string method;
    double ber = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_count = 0;

    bool operator==(const MetricRecord&) const = default;
};

struct SweepResult {
    std::vector<MetricRecord> records; // one per (snr, method), snr-major
    SweepConfig config_echo;
    double elapsed_seconds = 0.0;
};

/// Per-method accumulators from one trial.
struct TrialStats {
    double err_sq = 0.0;     // sum |h_hat - H|^2 over valid cells
    double h_sq = 0.0;       // sum |H|^2 over the same cells
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

/// Window placement for the blind subspace method: starts (symbol indices)
/// of runs of `blocks` consecutive data symbols. Pilot symbols are excluded
/// because the identifiability argument needs iid input symbols, which a
/// deterministic pilot breaks.
inline std::vector<std::size_t> subspace_window_symbols(const modem::OfdmConfig& ofdm,
                                                        std::size_t n_symbols,
                                                        std::size_t blocks,
                                                        std::size_t max_windows) {
    std::vector<std::size_t> starts;
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t s = 0; s <= n_symbols && starts.size() < max_windows; ++s) {
        const bool data_symbol = s < n_symbols && !ofdm.is_pilot_symbol(s);
        if (data_symbol && !in_run) {
            run_start = s;
            in_run = true;
        }
        if (!data_symbol && in_run) {
            for (std::size_t w = run_start; w + blocks <= s && starts.size() < max_windows;
                 w += blocks)
                starts.push_back(w);
            in_run = false;
        }
    }
    return starts;
}

inline void SweepConfig::validate() const {
    ofdm.validate();
    channel.effective_pdp().validate();
    if (channel.doppler_rate < 0.0) throw std::invalid_argument("doppler must be >= 0");
    if (channel.n_oscillators < 8) throw std::invalid_argument("oscillators must be >= 8");
    if (snr_grid_db.empty()) throw std::invalid_argument("snr grid must be nonempty");
    if (n_trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (n_symbols_per_trial < 1) throw std::invalid_argument("symbols_per_trial must be >= 1");
    if (methods.empty()) throw std::invalid_argument("at least one method required");
    if (channel.effective_pdp().max_delay() >= ofdm.cp_length)
        throw std::invalid_argument("pdp delay spread must stay below cp_length");
    for (const MethodSpec& m : methods) {
        switch (m.method) {
            case Method::Lms:
                if (ofdm.pilots.kind != modem::PilotKind::Comb)
                    throw std::invalid_argument("lms requires comb pilots");
                if (!(m.lms_step > 0.0) || m.lms_step >= 2.0)
                    throw std::invalid_argument("lms step must satisfy 0 < mu < 2");
                break;
            case Method::Ml:
                if (ofdm.pilots.kind != modem::PilotKind::Block)
                    throw std::invalid_argument("ml requires block pilots");
                if (m.ml_taps < 1 || m.ml_taps > ofdm.cp_length)
                    throw std::invalid_argument("ml n_taps must satisfy 1 <= N_h <= cp_length");
                break;
            case Method::LowRank:
                if (m.rank < 1 || m.rank > ofdm.n_subcarriers)
                    throw std::invalid_argument("lowrank rank must satisfy 1 <= p <= N");
                break;
            case Method::KalmanScalar:
                if (m.ar_order < 1 || m.ar_order > 8)
                    throw std::invalid_argument("kalman order must satisfy 1 <= p <= 8");
                break;
            case Method::Subspace: {
                if (ofdm.pilots.kind != modem::PilotKind::Block)
                    throw std::invalid_argument(
                        "subspace requires block pilots: the scale reference needs a pilot and "
                        "comb pilots break the iid-input assumption");
                if (m.sub_order > ofdm.cp_length * m.sub_blocks)
                    throw std::invalid_argument(
                        "subspace order exceeds cp_length * blocks (identifiability)");
                const auto windows = subspace_window_symbols(ofdm, n_symbols_per_trial,
                                                             m.sub_blocks, m.sub_superblocks);
                if (windows.size() < m.sub_superblocks)
                    throw std::invalid_argument(
                        "subspace: symbols_per_trial provides only " +
                        std::to_string(windows.size()) + " data-symbol windows of " +
                        std::to_string(m.sub_blocks) + ", need superblocks = " +
                        std::to_string(m.sub_superblocks));
                break;
            }
            default: break;
        }
        if (ofdm.pilots.kind == modem::PilotKind::None &&
            (m.method == Method::Ls || m.method == Method::Lms || m.method == Method::Mmse ||
             m.method == Method::Lmmse || m.method == Method::LowRank || m.method == Method::Ml ||
             m.method == Method::KalmanVector))
            throw std::invalid_argument(method_name(m.method) + " requires pilots");
        // decision-feedback kalman re-slices data cells, training mode is genie-aided
    }
}

namespace detail {

inline std::function<double(int)> jakes_correlation(double fdt) {
    return [fdt](int lag) { return num::bessel_j0(2.0 * num::kPi * fdt * std::abs(lag)); };
}

/// Immutable per-SNR estimator bank shared across worker threads.
struct EstimatorBank {
    double snr_db = 0.0;
    double noise_var = 0.0;
    double snr_linear = 0.0;
    std::vector<std::size_t> pilot_positions; // comb positions or all subcarriers
    bool comb = false;
    std::shared_ptr<est::MmseEstimator> mmse;
    std::shared_ptr<est::LmmseSmoother> lmmse;
    std::shared_ptr<est::LowRankEstimator> lowrank;
    std::shared_ptr<est::MlEstimator> ml;
    // kalman models (snr-independent but kept here for locality)
    std::shared_ptr<channel::ArModel> scalar_ar;
    std::shared_ptr<channel::ArModel> vector_ar;
    CMat vector_r0;
    std::function<double(int)> corr_fn;
};

// Yule-Walker loading applied to every Jakes fit: keeps the static limit
// solvable and the innovation variance honest for finite-oscillator fading.
inline constexpr double kArLoading = 1e-6;

inline EstimatorBank build_bank(const SweepConfig& cfg, double snr_db,
                                const CMat* empirical_r /* may be null */) {
    EstimatorBank bank;
    bank.snr_db = snr_db;
    bank.noise_var = cfg.noiseless ? 0.0 : channel::snr_to_noise_var(snr_db, 1.0);
    bank.snr_linear = bank.noise_var > 0.0 ? 1.0 / bank.noise_var
                                           : std::numeric_limits<double>::infinity();
    const std::size_t n = cfg.ofdm.n_subcarriers;
    const channel::PowerDelayProfile pdp = cfg.channel.effective_pdp();
    bank.comb = cfg.ofdm.pilots.kind == modem::PilotKind::Comb;
    bank.pilot_positions = bank.comb ? cfg.ofdm.comb_positions() : est::all_subcarriers(n);

    const double beta = cfg.ofdm.constellation.beta();
    bool want_mmse = false, want_lmmse = false, want_lowrank = false, want_ml = false;
    bool want_kalman = false, want_kalman_vec = false;
    std::size_t rank = 4, ml_taps = 16;
    int ar_order = 2;
    for (const MethodSpec& m : cfg.methods) {
        switch (m.method) {
            case Method::Mmse: want_mmse = true; break;
            case Method::Lmmse: want_lmmse = true; break;
            case Method::LowRank:
                want_lowrank = true;
                rank = m.rank;
                break;
            case Method::Ml:
                want_ml = true;
                ml_taps = m.ml_taps;
                break;
            case Method::KalmanScalar:
                want_kalman = true;
                ar_order = m.ar_order;
                break;
            case Method::KalmanVector: want_kalman_vec = true; break;
            default: break;
        }
    }

    if (want_mmse) {
        const CVec x(bank.pilot_positions.size(), cfg.ofdm.pilots.pilot_value);
        bank.mmse = std::make_shared<est::MmseEstimator>(pdp, n, bank.pilot_positions, x,
                                                         bank.noise_var);
    }
    if (want_lmmse || want_lowrank) {
        est::FreqCorrelation corr;
        if (empirical_r != nullptr)
            corr = est::FreqCorrelation{*empirical_r, bank.snr_linear, beta};
        else
            corr = est::make_freq_correlation(pdp, bank.pilot_positions, n, bank.snr_linear,
                                              beta);
        if (want_lmmse) bank.lmmse = std::make_shared<est::LmmseSmoother>(corr);
        if (want_lowrank) {
            const std::size_t p = std::min(rank, bank.pilot_positions.size());
            bank.lowrank = std::make_shared<est::LowRankEstimator>(corr, p);
        }
    }
    if (want_ml) bank.ml = std::make_shared<est::MlEstimator>(n, ml_taps);
    if (want_kalman || want_kalman_vec) {
        bank.corr_fn = jakes_correlation(cfg.channel.effective_doppler());
        if (want_kalman)
            bank.scalar_ar = std::make_shared<channel::ArModel>(
                channel::fit_ar_yule_walker(bank.corr_fn, ar_order, kArLoading));
        if (want_kalman_vec) {
            bank.vector_r0 = est::correlation_from_pdp(pdp, est::all_subcarriers(n), n);
            const double rho1 = bank.corr_fn(1);
            CMat r1 = num::scaled(bank.vector_r0, rho1);
            bank.vector_ar = std::make_shared<channel::ArModel>(
                channel::fit_vector_ar(bank.vector_r0, r1));
        }
    }
    return bank;
}

struct TrialContext {
    modem::Frame frame;
    channel::ChannelRealization real;
    CMat y_grid; // demodulated symbols x N
    CVec rx_stream;
    double noise_var = 0.0;
};

inline TrialContext run_chain(const SweepConfig& cfg, double noise_var, std::size_t snr_idx,
                              std::size_t trial_idx) {
    const std::size_t n = cfg.ofdm.n_subcarriers;
    const std::size_t n_sym = cfg.n_symbols_per_trial;
    const std::uint64_t fading_seed =
        rng::derive(cfg.master_seed, 1, std::uint64_t(snr_idx), std::uint64_t(trial_idx));
    const std::uint64_t noise_seed =
        rng::derive(cfg.master_seed, 2, std::uint64_t(snr_idx), std::uint64_t(trial_idx));
    const std::uint64_t data_seed =
        rng::derive(cfg.master_seed, 3, std::uint64_t(snr_idx), std::uint64_t(trial_idx));

    TrialContext ctx;
    ctx.noise_var = noise_var;

    rng::SplitMix64 dg(data_seed);
    BitVec bits(modem::payload_bits_needed(cfg.ofdm, n_sym));
    for (auto& b : bits) b = std::uint8_t(dg.next() & 1u);
    ctx.frame = modem::assemble_frame(bits, cfg.ofdm, n_sym);

    if (cfg.channel.type == ChannelConfig::Type::Identity) {
        ctx.real = channel::make_identity_realization(n_sym, n);
    } else {
        channel::FadingSpec spec;
        spec.doppler_rate = cfg.channel.doppler_rate;
        spec.n_oscillators = cfg.channel.n_oscillators;
        spec.seed = fading_seed;
        ctx.real = channel::generate_fading(cfg.channel.pdp, spec, n_sym, n);
    }

    const std::size_t sps = n + cfg.ofdm.cp_length;
    CVec tx_stream;
    tx_stream.reserve(n_sym * sps);
    for (std::size_t s = 0; s < n_sym; ++s) {
        CVec row(n);
        for (std::size_t k = 0; k < n; ++k) row[k] = ctx.frame.grid(s, k);
        const CVec t = modem::ofdm_modulate(row, cfg.ofdm);
        tx_stream.insert(tx_stream.end(), t.begin(), t.end());
    }
    ctx.rx_stream = channel::apply_channel_stream(tx_stream, ctx.real, sps, noise_var, noise_seed);

    ctx.y_grid = CMat(n_sym, n);
    for (std::size_t s = 0; s < n_sym; ++s) {
        const CVec sym(ctx.rx_stream.begin() + std::ptrdiff_t(s * sps),
                       ctx.rx_stream.begin() + std::ptrdiff_t((s + 1) * sps));
        const CVec y = modem::ofdm_demodulate(sym, cfg.ofdm);
        for (std::size_t k = 0; k < n; ++k) ctx.y_grid(s, k) = y[k];
    }
    return ctx;
}

/// A method's per-trial output. `equalization_grid`, when present, replaces
/// the estimate for data detection: the Kalman trackers fold the current
/// symbol's observation into their filtered estimate, and equalizing that
/// same symbol with it would cancel part of the noise (genie-training BER
/// below perfect CSI), so detection uses the one-step prediction instead.
struct MethodOutput {
    est::ChannelEstimate estimate;
    std::optional<CMat> equalization_grid;
};

inline MethodOutput estimate_with_method(const SweepConfig& cfg, const MethodSpec& spec,
                                         const EstimatorBank& bank, const TrialContext& ctx) {
    const std::size_t n = cfg.ofdm.n_subcarriers;
    const std::size_t n_sym = cfg.n_symbols_per_trial;
    MethodOutput mo;
    est::ChannelEstimate& out = mo.estimate;
    out.method = spec.name();
    out.h_hat = CMat(n_sym, n);
    out.per_symbol_valid.assign(n_sym, false);
    const cplx pilot = cfg.ofdm.pilots.pilot_value;
    const bool comb = bank.comb;
    const auto& pos = bank.pilot_positions;

    auto pilot_row_ls = [&](std::size_t s) {
        CVec h(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) h[i] = ctx.y_grid(s, pos[i]) / pilot;
        return h;
    };
    auto put_row = [&](std::size_t s, const CVec& row) {
        for (std::size_t k = 0; k < n; ++k) out.h_hat(s, k) = row[k];
        out.per_symbol_valid[s] = true;
    };
    auto expand = [&](std::size_t s, const CVec& at_pilots) {
        if (!comb) {
            put_row(s, at_pilots);
        } else {
            put_row(s, est::interpolate_comb(at_pilots, pos, n, spec.interp));
        }
    };
    const bool block = cfg.ofdm.pilots.kind == modem::PilotKind::Block;
    auto symbol_has_estimate = [&](std::size_t s) {
        return comb || !block || cfg.ofdm.is_pilot_symbol(s);
    };

    switch (spec.method) {
        case Method::Perfect:
            for (std::size_t s = 0; s < n_sym; ++s) put_row(s, ctx.real.freq_row(s));
            break;
        case Method::Ls:
            for (std::size_t s = 0; s < n_sym; ++s)
                if (symbol_has_estimate(s)) expand(s, pilot_row_ls(s));
            break;
        case Method::Mmse:
            for (std::size_t s = 0; s < n_sym; ++s) {
                if (!symbol_has_estimate(s)) continue;
                CVec y(pos.size());
                for (std::size_t i = 0; i < pos.size(); ++i) y[i] = ctx.y_grid(s, pos[i]);
                expand(s, bank.mmse->apply(y));
            }
            break;
        case Method::Lmmse:
            for (std::size_t s = 0; s < n_sym; ++s)
                if (symbol_has_estimate(s)) expand(s, bank.lmmse->apply(pilot_row_ls(s)));
            break;
        case Method::LowRank:
            for (std::size_t s = 0; s < n_sym; ++s)
                if (symbol_has_estimate(s)) expand(s, bank.lowrank->apply(pilot_row_ls(s)));
            break;
        case Method::Ml:
            for (std::size_t s = 0; s < n_sym; ++s)
                if (symbol_has_estimate(s)) put_row(s, bank.ml->apply(pilot_row_ls(s)));
            break;
        case Method::Lms: {
            std::vector<est::LmsTracker> trackers(pos.size(), est::LmsTracker(spec.lms_step));
            CVec at_pilots(pos.size());
            for (std::size_t s = 0; s < n_sym; ++s) {
                for (std::size_t i = 0; i < pos.size(); ++i)
                    at_pilots[i] = trackers[i].step(ctx.y_grid(s, pos[i]), pilot);
                expand(s, at_pilots);
            }
            break;
        }
        case Method::KalmanScalar: {
            std::vector<est::KalmanState> states;
            states.reserve(n);
            for (std::size_t k = 0; k < n; ++k)
                states.push_back(est::make_scalar_kalman(*bank.scalar_ar, bank.corr_fn));
            const modem::Constellation& c = cfg.ofdm.constellation;
            mo.equalization_grid = CMat(n_sym, n);
            for (std::size_t s = 0; s < n_sym; ++s) {
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx hpred = num::matvec(states[k].c, states[k].x)[0];
                    cplx sym;
                    // decision feedback bootstraps from symbol 0 (known
                    // preamble); an uninitialized tracker would phase-lock
                    // onto its first wrong decision otherwise
                    if (!spec.decision_feedback || s == 0 || cfg.ofdm.is_pilot_cell(s, k)) {
                        sym = ctx.frame.grid(s, k); // training mode: genie symbols
                    } else {
                        // decision feedback: slice against the predicted gain
                        cplx dec = ctx.y_grid(s, k);
                        if (std::abs(hpred) > 1e-12) dec /= hpred;
                        const BitVec bits = modem::demap_symbols({dec}, c);
                        sym = modem::map_bits(bits, c)[0];
                    }
                    out.h_hat(s, k) =
                        est::kalman_step_scalar(states[k], ctx.y_grid(s, k), sym, ctx.noise_var);
                    // symbol 0 has no usable prediction; the filtered value
                    // stands in (block frames carry no data there anyway)
                    (*mo.equalization_grid)(s, k) = s == 0 ? out.h_hat(s, k) : hpred;
                }
                out.per_symbol_valid[s] = true;
            }
            break;
        }
        case Method::KalmanVector: {
            est::KalmanState st = est::make_vector_kalman(*bank.vector_ar, bank.vector_r0);
            mo.equalization_grid = CMat(n_sym, n);
            for (std::size_t s = 0; s < n_sym; ++s) {
                const CVec pred = num::matvec(st.c, st.x);
                CVec y(n), sym(n);
                for (std::size_t k = 0; k < n; ++k) {
                    y[k] = ctx.y_grid(s, k);
                    sym[k] = ctx.frame.grid(s, k); // training mode
                }
                const CVec h = est::kalman_step_vector(st, y, sym, ctx.noise_var);
                put_row(s, h);
                for (std::size_t k = 0; k < n; ++k)
                    (*mo.equalization_grid)(s, k) = s == 0 ? h[k] : pred[k];
            }
            break;
        }
        case Method::Subspace: {
            const std::size_t sps = n + cfg.ofdm.cp_length;
            const auto symbol_starts = subspace_window_symbols(
                cfg.ofdm, n_sym, spec.sub_blocks, spec.sub_superblocks);
            std::vector<std::size_t> starts(symbol_starts.size());
            for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = symbol_starts[i] * sps;
            const est::SubspaceResult res =
                est::subspace_identify_windows(ctx.rx_stream, n, cfg.ofdm.cp_length,
                                               spec.sub_order, spec.sub_blocks, starts);
            // undo the scale ambiguity against the first pilot cell
            std::size_t pk = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (cfg.ofdm.is_pilot_cell(0, k)) {
                    pk = k;
                    break;
                }
            const est::PilotReference ref{ctx.frame.grid(0, pk), ctx.y_grid(0, pk), pk, n};
            const CVec taps = est::resolve_scale_ambiguity(res.taps, ref);
            CVec row(n, cplx{});
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t d = 0; d < taps.size(); ++d) {
                    const double ang = -2.0 * num::kPi * double(k) * double(d) / double(n);
                    row[k] += taps[d] * cplx(std::cos(ang), std::sin(ang));
                }
            for (std::size_t s = 0; s < n_sym; ++s) put_row(s, row);
            break;
        }
    }
    return mo;
}

} // namespace detail

/// Run one (snr, trial) cell: the shared chain once, then every method's
/// estimate, equalization and accumulation against the same received grid.
inline std::vector<TrialStats> run_trial(const SweepConfig& cfg,
                                         const detail::EstimatorBank& bank, std::size_t snr_idx,
                                         std::size_t trial_idx) {
    const std::size_t n = cfg.ofdm.n_subcarriers;
    const std::size_t n_sym = cfg.n_symbols_per_trial;
    const detail::TrialContext ctx = detail::run_chain(cfg, bank.noise_var, snr_idx, trial_idx);

    std::vector<TrialStats> stats(cfg.methods.size());
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        detail::MethodOutput mo;
        try {
            mo = detail::estimate_with_method(cfg, cfg.methods[mi], bank, ctx);
        } catch (const std::exception& e) {
            throw std::runtime_error("method " + cfg.methods[mi].name() + ": " + e.what());
        }
        const est::ChannelEstimate& estgrid = mo.estimate;
        const CMat& eq_grid = mo.equalization_grid ? *mo.equalization_grid : estgrid.h_hat;
        TrialStats& st = stats[mi];

        // normalized-MSE accumulators over valid cells
        for (std::size_t s = 0; s < n_sym; ++s) {
            if (!estgrid.per_symbol_valid[s]) continue;
            for (std::size_t k = 0; k < n; ++k) {
                st.err_sq += std::norm(estgrid.h_hat(s, k) - ctx.real.freq_response(s, k));
                st.h_sq += std::norm(ctx.real.freq_response(s, k));
            }
        }

        // equalize data cells holding the last valid estimate
        const int bps = cfg.ofdm.constellation.bits_per_symbol();
        std::size_t bit_cursor = 0;
        std::ptrdiff_t held = -1;
        for (std::size_t s = 0; s < n_sym; ++s) {
            if (estgrid.per_symbol_valid[s]) held = std::ptrdiff_t(s);
            for (std::size_t k = 0; k < n; ++k) {
                if (cfg.ofdm.is_pilot_cell(s, k)) continue;
                const std::size_t cell_bits = std::size_t(bps);
                if (held < 0) {
                    st.bit_errors += [&] {
                        std::size_t e = 0;
                        for (std::size_t b = 0; b < cell_bits; ++b)
                            if (ctx.frame.payload_bits[bit_cursor + b]) ++e;
                        return e; // erased cells decode as zero bits
                    }();
                } else {
                    const cplx h = eq_grid(std::size_t(held), k);
                    cplx xhat = ctx.y_grid(s, k);
                    BitVec dec;
                    if (std::abs(h) < 1e-12) {
                        dec.assign(cell_bits, 0); // erasure
                    } else {
                        xhat /= h;
                        dec = modem::demap_symbols({xhat}, cfg.ofdm.constellation);
                    }
                    for (std::size_t b = 0; b < cell_bits; ++b)
                        if (dec[b] != ctx.frame.payload_bits[bit_cursor + b]) ++st.bit_errors;
                }
                st.bits += cell_bits;
                bit_cursor += cell_bits;
            }
        }
    }
    return stats;
}

/// Full Monte Carlo sweep over the SNR grid. Deterministic in the config
/// (including master_seed) for any worker count.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    SweepConfig work = cfg;
    // the perfect-CSI baseline is always present as a reference
    bool has_perfect = false;
    for (const MethodSpec& m : work.methods) has_perfect |= m.method == Method::Perfect;
    if (!has_perfect) {
        MethodSpec p;
        p.method = Method::Perfect;
        work.methods.insert(work.methods.begin(), p);
    }

    // empirical-correlation prelude (behind the config flag)
    std::vector<std::optional<CMat>> empirical(work.snr_grid_db.size());
    if (work.channel.empirical_correlation) {
        for (std::size_t si = 0; si < work.snr_grid_db.size(); ++si) {
            const double noise_var =
                work.noiseless ? 0.0 : channel::snr_to_noise_var(work.snr_grid_db[si], 1.0);
            std::vector<CVec> samples;
            const auto& pos = work.ofdm.pilots.kind == modem::PilotKind::Comb
                                  ? work.ofdm.comb_positions()
                                  : est::all_subcarriers(work.ofdm.n_subcarriers);
            for (std::size_t t = 0; t < work.channel.corr_train_symbols; ++t) {
                channel::FadingSpec spec;
                spec.doppler_rate = work.channel.effective_doppler();
                spec.n_oscillators = work.channel.n_oscillators;
                spec.seed = rng::derive(work.master_seed, 0xE, std::uint64_t(si), t);
                const auto ch = channel::generate_fading(work.channel.effective_pdp(), spec, 1,
                                                         work.ofdm.n_subcarriers);
                rng::SplitMix64 g(rng::derive(work.master_seed, 0xF, std::uint64_t(si), t));
                CVec h(pos.size());
                for (std::size_t i = 0; i < pos.size(); ++i)
                    h[i] = ch.freq_response(0, pos[i]) + std::sqrt(noise_var) * g.randn_c();
                samples.push_back(h);
            }
            empirical[si] = est::empirical_correlation(samples, noise_var);
        }
    }

    std::vector<detail::EstimatorBank> banks;
    for (std::size_t si = 0; si < work.snr_grid_db.size(); ++si)
        banks.push_back(detail::build_bank(work, work.snr_grid_db[si],
                                           empirical[si] ? &*empirical[si] : nullptr));

    const std::size_t n_tasks = work.snr_grid_db.size() * work.n_trials;
    std::vector<std::vector<TrialStats>> slots(n_tasks);
    std::vector<std::string> errors(n_tasks);

    std::size_t workers = work.n_workers == 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : work.n_workers;
    workers = std::min(workers, n_tasks);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks) return;
            const std::size_t si = task / work.n_trials;
            const std::size_t ti = task % work.n_trials;
            try {
                slots[task] = run_trial(work, banks[si], si, ti);
            } catch (const std::exception& e) {
                errors[task] = "snr=" + std::to_string(work.snr_grid_db[si]) +
                               " trial=" + std::to_string(ti) + ": " + e.what();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const std::string& e : errors)
        if (!e.empty()) throw std::runtime_error("sweep failed at " + e);

    SweepResult result;
    result.config_echo = work;
    for (std::size_t si = 0; si < work.snr_grid_db.size(); ++si) {
        std::vector<TrialStats> agg(work.methods.size());
        for (std::size_t ti = 0; ti < work.n_trials; ++ti) {
            const auto& s = slots[si * work.n_trials + ti];
            for (std::size_t mi = 0; mi < work.methods.size(); ++mi) {
                agg[mi].err_sq += s[mi].err_sq;
                agg[mi].h_sq += s[mi].h_sq;
                agg[mi].bit_errors += s[mi].bit_errors;
                agg[mi].bits += s[mi].bits;
            }
        }
        for (std::size_t mi = 0; mi < work.methods.size(); ++mi) {
            MetricRecord rec;
            rec.snr_db = work.snr_grid_db[si];
            rec.method = work.methods[mi].name();
            rec.ber = agg[mi].bits > 0 ? double(agg[mi].bit_errors) / double(agg[mi].bits) : 0.0;
            rec.mse = agg[mi].h_sq > 0.0 ? agg[mi].err_sq / agg[mi].h_sq : 0.0;
            rec.rmse = std::sqrt(rec.mse);
            rec.trials = work.n_trials;
            rec.bit_count = agg[mi].bits;
            result.records.push_back(rec);
        }
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace ofdmest::harness
