// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>

#include "ofdmest/harness/metrics.hpp"
#include "ofdmest/harness/results_io.hpp"
#include "ofdmest/harness/sweep.hpp"
#include "test_util.hpp"

using namespace ofdmest;
using namespace ofdmest::harness;
using ofdmest::num::CMat;
using ofdmest::num::cplx;
using ofdmest::num::CVec;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.ofdm.n_subcarriers = 32;
    cfg.ofdm.cp_length = 8;
    cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::QAM16);
    cfg.ofdm.pilots = {modem::PilotKind::Block, 5, 4, cplx(1, 0)};
    cfg.channel.pdp = channel::PowerDelayProfile::exponential();
    cfg.channel.doppler_rate = 0.01;
    cfg.snr_grid_db = {0, 10, 20};
    cfg.n_trials = 30;
    cfg.n_symbols_per_trial = 20;
    cfg.master_seed = 7;
    return cfg;
}

const MetricRecord* find_record(const SweepResult& r, double snr, const std::string& m) {
    for (const auto& rec : r.records)
        if (rec.snr_db == snr && rec.method == m) return &rec;
    return nullptr;
}

} // namespace

TEST_CASE("compute_ber") {
    REQUIRE(compute_ber({1, 0, 1}, {1, 0, 1}) == 0.0);
    REQUIRE(compute_ber({1, 0, 1}, {0, 1, 0}) == 1.0);
    REQUIRE(compute_ber({1, 1, 0}, {1, 0, 0}) == Approx(1.0 / 3.0));
    REQUIRE_THROWS_AS(compute_ber({1}, {1, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(compute_ber({}, {}), std::invalid_argument);
}

TEST_CASE("compute_mse: normalization and valid-mask handling") {
    auto g = testutil::rng(3);
    CMat truth(2, 4);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t k = 0; k < 4; ++k) truth(s, k) = testutil::randn_c(g);

    est::ChannelEstimate exact{truth, "x", {true, true}};
    REQUIRE(compute_mse(exact, truth) == 0.0);

    est::ChannelEstimate zero{CMat(2, 4), "x", {true, true}};
    REQUIRE(compute_mse(zero, truth) == Approx(1.0));

    // ||eps||^2 = 0.01 ||H||^2 -> 0.01
    double hsq = 0.0;
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t k = 0; k < 4; ++k) hsq += std::norm(truth(s, k));
    CMat pert = truth;
    CVec dir(8);
    double dsq = 0.0;
    for (auto& v : dir) {
        v = testutil::randn_c(g);
        dsq += std::norm(v);
    }
    const double scale = std::sqrt(0.01 * hsq / dsq);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t k = 0; k < 4; ++k) pert(s, k) += scale * dir[s * 4 + k];
    est::ChannelEstimate p{pert, "x", {true, true}};
    REQUIRE(compute_mse(p, truth) == Approx(0.01).margin(1e-12));

    // invalid symbols are excluded
    CMat garbage = truth;
    garbage(1, 0) = cplx(1e9, 0);
    est::ChannelEstimate masked{garbage, "x", {true, false}};
    REQUIRE(compute_mse(masked, truth) == 0.0);

    REQUIRE_THROWS_AS(compute_mse(zero, CMat(2, 4)), std::invalid_argument);
}

TEST_CASE("compute_rmse") {
    REQUIRE(compute_rmse(0.0) == 0.0);
    REQUIRE(compute_rmse(1.0) == 1.0);
    REQUIRE(compute_rmse(0.04) == Approx(0.2));
    REQUIRE_THROWS_AS(compute_rmse(-1e-9), std::invalid_argument);
}

TEST_CASE("run_sweep: noiseless identity channel gives zero BER and tiny MSE") {
    SweepConfig cfg = small_config();
    cfg.channel.type = ChannelConfig::Type::Identity;
    cfg.noiseless = true;
    cfg.snr_grid_db = {0};
    cfg.n_trials = 3;
    cfg.methods = {MethodSpec{.method = Method::Ls}};
    const SweepResult r = run_sweep(cfg);
    const MetricRecord* ls = find_record(r, 0, "ls");
    REQUIRE(ls != nullptr);
    REQUIRE(ls->ber == 0.0);
    REQUIRE(ls->mse <= 1e-20);
    REQUIRE(ls->rmse == Approx(std::sqrt(ls->mse)));
}

TEST_CASE("run_sweep: byte-identical across runs and worker counts") {
    SweepConfig cfg = small_config();
    cfg.n_trials = 10;
    cfg.methods = {MethodSpec{.method = Method::Ls}, MethodSpec{.method = Method::Lmmse}};
    cfg.n_workers = 1;
    const std::string a = results_to_csv(run_sweep(cfg));
    cfg.n_workers = 4;
    const std::string b = results_to_csv(run_sweep(cfg));
    cfg.n_workers = 0;
    const std::string c = results_to_csv(run_sweep(cfg));
    REQUIRE(a == b);
    REQUIRE(a == c);
}

TEST_CASE("run_sweep: perfect baseline injected, BER ordering sane") {
    SweepConfig cfg = small_config();
    cfg.methods = {MethodSpec{.method = Method::Ls}, MethodSpec{.method = Method::Lmmse},
                   MethodSpec{.method = Method::KalmanScalar}};
    const SweepResult r = run_sweep(cfg);
    for (double snr : cfg.snr_grid_db) {
        const MetricRecord* perfect = find_record(r, snr, "perfect");
        REQUIRE(perfect != nullptr);
        for (const std::string m : {"ls", "lmmse", "kalman"}) {
            const MetricRecord* rec = find_record(r, snr, m);
            REQUIRE(rec != nullptr);
            // estimated CSI can never beat genie CSI beyond Monte Carlo noise
            const double se = 2.0 * std::sqrt(perfect->ber * (1 - perfect->ber) /
                                              double(perfect->bit_count));
            REQUIRE(rec->ber >= perfect->ber - se);
        }
    }
    // monotone BER for each method across the grid (one small inversion allowed)
    for (const std::string m : {"perfect", "ls", "lmmse", "kalman"}) {
        int inversions = 0;
        for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i) {
            const double prev = find_record(r, cfg.snr_grid_db[i - 1], m)->ber;
            const double cur = find_record(r, cfg.snr_grid_db[i], m)->ber;
            if (cur > prev) ++inversions;
        }
        REQUIRE(inversions == 0);
    }
}

TEST_CASE("run_sweep: comb pilots with lms and transform-interp lmmse") {
    SweepConfig cfg = small_config();
    cfg.ofdm.pilots = {modem::PilotKind::Comb, 5, 4, cplx(1, 0)};
    cfg.snr_grid_db = {15};
    cfg.n_trials = 10;
    MethodSpec lms{.method = Method::Lms};
    MethodSpec lmmse{.method = Method::Lmmse};
    lmmse.interp = est::InterpMethod::Transform;
    cfg.methods = {lms, lmmse};
    const SweepResult r = run_sweep(cfg);
    REQUIRE(find_record(r, 15, "lms")->mse < 1.0);
    REQUIRE(find_record(r, 15, "lmmse")->mse < 0.1);
    REQUIRE(find_record(r, 15, "lmmse")->ber < find_record(r, 15, "lms")->ber + 0.05);
}

TEST_CASE("run_sweep: QAM16 perfect-CSI AWGN point tracks the closed form") {
    // Eb/N0 = 10 dB on a unit tap: snr_db = 10 log10(4 * 10)
    SweepConfig cfg;
    cfg.ofdm.n_subcarriers = 64;
    cfg.ofdm.cp_length = 16;
    cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::QAM16);
    cfg.ofdm.pilots.kind = modem::PilotKind::None;
    cfg.channel.type = ChannelConfig::Type::Identity;
    cfg.snr_grid_db = {10.0 * std::log10(40.0)};
    cfg.n_trials = 4;
    cfg.n_symbols_per_trial = 250; // 4*250*64*4 = 256000 bits
    cfg.master_seed = 11;
    cfg.methods = {MethodSpec{.method = Method::Perfect}};
    const SweepResult r = run_sweep(cfg);
    // exact Gray-QAM16 bit error rate at gamma = sqrt(8)
    const double gamma = std::sqrt(8.0);
    auto Q = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
    const double want = 0.75 * Q(gamma) + 0.5 * Q(3 * gamma) - 0.25 * Q(5 * gamma);
    REQUIRE(r.records[0].ber == Approx(want).epsilon(0.15));
}

TEST_CASE("csv: golden bytes and header-only empty table") {
    SweepResult r;
    r.records.push_back({5.0, "ls", 0.25, 0.0625, 0.25, 10, 1024});
    const std::string got = results_to_csv(r);
    REQUIRE(got == "snr_db,method,ber,mse,rmse,trials,bit_count\n"
                   "5,ls,0.25,0.0625,0.25,10,1024\n");

    SweepResult empty;
    REQUIRE(results_to_csv(empty) == "snr_db,method,ber,mse,rmse,trials,bit_count\n");

    // 17-significant-digit rendering for non-terminating decimals
    SweepResult irr;
    irr.records.push_back({5.0, "ls", 1.0 / 3.0, 0.1, std::sqrt(0.1), 1, 3});
    const std::string line = results_to_csv(irr);
    REQUIRE(line.find("0.33333333333333331") != std::string::npos);
    REQUIRE(line.find("0.31622776601683794") != std::string::npos);
}

TEST_CASE("json: full round trip of records and config echo") {
    SweepConfig cfg = small_config();
    cfg.n_trials = 2;
    cfg.methods = {MethodSpec{.method = Method::Ls}, MethodSpec{.method = Method::LowRank}};
    cfg.methods[1].rank = 3;
    const SweepResult r = run_sweep(cfg);
    const std::string text = results_to_json(r);
    const SweepResult back = results_from_json(text);
    REQUIRE(back.records == r.records);
    REQUIRE(results_to_json(back) == text); // lossless, byte-stable
}

TEST_CASE("run_sweep: empirical-correlation mode stays close to analytic LMMSE") {
    SweepConfig base = small_config();
    base.snr_grid_db = {10};
    base.n_trials = 25;
    base.methods = {MethodSpec{.method = Method::Lmmse}};
    const SweepResult analytic = run_sweep(base);

    SweepConfig emp = base;
    emp.channel.empirical_correlation = true;
    emp.channel.corr_train_symbols = 400;
    const SweepResult empirical = run_sweep(emp);

    const double a = find_record(analytic, 10, "lmmse")->mse;
    const double e = find_record(empirical, 10, "lmmse")->mse;
    REQUIRE(e < 3.0 * a);       // sample covariance costs a little accuracy
    REQUIRE(e < 0.5 * find_record(analytic, 10, "perfect")->mse + 0.1);
}

TEST_CASE("run_sweep: subspace method integrates into the sweep") {
    SweepConfig cfg;
    cfg.ofdm.n_subcarriers = 8;
    cfg.ofdm.cp_length = 2;
    cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::QAM16);
    cfg.ofdm.pilots = {modem::PilotKind::Block, 5, 4, cplx(1, 0)};
    cfg.channel.type = ChannelConfig::Type::Fading;
    cfg.channel.pdp.taps = {{0, 0.7}, {1, 0.3}};
    cfg.channel.doppler_rate = 0.0; // blind method assumes a stationary channel
    cfg.snr_grid_db = {25};
    cfg.n_trials = 4;
    cfg.n_symbols_per_trial = 1001; // 200 pilot-free runs x 2 windows each
    cfg.master_seed = 2;
    MethodSpec sub{.method = Method::Subspace};
    sub.sub_blocks = 2;
    sub.sub_superblocks = 400;
    sub.sub_order = 1;
    cfg.methods = {sub};
    const SweepResult r = run_sweep(cfg);
    const MetricRecord* rec = find_record(r, 25, "subspace");
    REQUIRE(rec != nullptr);
    REQUIRE(rec->mse < 0.05);
    REQUIRE(rec->ber < 0.05);

    // comb pilots pollute the blind method's iid input and are rejected
    SweepConfig bad = cfg;
    bad.ofdm.pilots.kind = modem::PilotKind::Comb;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("run_sweep: rmse^2 equals mse on every record") {
    SweepConfig cfg = small_config();
    cfg.n_trials = 4;
    cfg.methods = {MethodSpec{.method = Method::Ls}, MethodSpec{.method = Method::Mmse}};
    const SweepResult r = run_sweep(cfg);
    for (const auto& rec : r.records)
        REQUIRE(rec.rmse * rec.rmse == Approx(rec.mse).margin(1e-15));
}
