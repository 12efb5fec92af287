// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include "ofdmest/cli/config.hpp"

using namespace ofdmest;
using namespace ofdmest::cli;

TEST_CASE("config: minimal document gets the documented defaults") {
    const SweepConfig cfg = parse_config("[sweep]\nmethods = ls\n");
    REQUIRE(cfg.ofdm.n_subcarriers == 64);
    REQUIRE(cfg.ofdm.cp_length == 16);
    REQUIRE(cfg.ofdm.constellation.name() == "qam16");
    REQUIRE(cfg.ofdm.pilots.kind == modem::PilotKind::Comb);
    REQUIRE(cfg.ofdm.pilots.spacing == 4);
    REQUIRE(cfg.snr_grid_db == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
    REQUIRE(cfg.n_trials == 500);
    REQUIRE(cfg.n_symbols_per_trial == 100);
    REQUIRE(cfg.methods.size() == 1);
    REQUIRE(cfg.methods[0].method == harness::Method::Ls);
}

TEST_CASE("config: full document round trips into a valid config") {
    const std::string text = R"(
# everything spelled out
[ofdm]
n_subcarriers = 32
cp_length = 8
constellation = bpsk
pilot_type = block
pilot_period = 4

[channel]
type = fading
pdp_delays = 0,2,5
pdp_powers = 0.5,0.3,0.2
doppler = 0.02
oscillators = 16

[sweep]
methods = ls,kalman,lowrank
snr_db = 5,15
trials = 7
symbols_per_trial = 40
seed = 99
noiseless = false
metrics = ber,mse

[methods.kalman]
order = 3
mode = decision_feedback

[methods.lowrank]
rank = 3
)";
    const SweepConfig cfg = parse_config(text);
    REQUIRE(cfg.ofdm.constellation.name() == "bpsk");
    REQUIRE(cfg.channel.pdp.taps.size() == 3);
    REQUIRE(cfg.channel.pdp.taps[1].delay == 2);
    REQUIRE(cfg.channel.pdp.taps[0].power == Approx(0.5));
    REQUIRE(cfg.methods.size() == 3);
    REQUIRE(cfg.methods[1].ar_order == 3);
    REQUIRE(cfg.methods[1].decision_feedback);
    REQUIRE(cfg.methods[2].rank == 3);
    REQUIRE(cfg.master_seed == 99);
    REQUIRE(cfg.metrics == std::vector<std::string>{"ber", "mse"});
}

TEST_CASE("config: snr range form") {
    const SweepConfig cfg = parse_config("[sweep]\nmethods = ls\nsnr_db = 0:30:5\n");
    REQUIRE(cfg.snr_grid_db == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
}

TEST_CASE("config: parse errors carry line numbers") {
    try {
        parse_config("[ofdm]\nn_subcarriers 64\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line == 2);
        REQUIRE(std::string(e.what()).find("key = value") != std::string::npos);
    }

    try {
        parse_config("[ofdm]\nbogus_key = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line == 2);
        REQUIRE(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("config: unknown section and unknown method rejected") {
    REQUIRE_THROWS_AS(parse_config("[nonsense]\nx = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config("[sweep]\nmethods = warp_drive\n"), ConfigError);
}

TEST_CASE("config: constraint violations name the offending keys") {
    try {
        parse_config("[ofdm]\nn_subcarriers = 64\ncp_length = 64\n[sweep]\nmethods = ls\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        REQUIRE(what.find("cp_length") != std::string::npos);
        REQUIRE(what.find("n_subcarriers") != std::string::npos);
    }

    try {
        parse_config("[ofdm]\npilot_spacing = 3\n[sweep]\nmethods = ls\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        REQUIRE(what.find("pilot_spacing") != std::string::npos);
        REQUIRE(what.find("divide") != std::string::npos);
    }
}

TEST_CASE("config: method/pilot compatibility gates") {
    REQUIRE_THROWS_AS(parse_config("[ofdm]\npilot_type = block\n[sweep]\nmethods = lms\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_config("[sweep]\nmethods = ml\n"), ConfigError); // comb default
    REQUIRE_NOTHROW(parse_config("[ofdm]\npilot_type = block\n[sweep]\nmethods = ml\n"));
}

TEST_CASE("config: parameters for unlisted methods are rejected") {
    REQUIRE_THROWS_AS(parse_config("[sweep]\nmethods = ls\n[methods.lowrank]\nrank = 2\n"),
                      ConfigError);
}

TEST_CASE("config: overrides apply before validation") {
    RawConfig raw = parse_raw("[sweep]\nmethods = ls\n");
    apply_override(raw, "ofdm.n_subcarriers=128");
    const SweepConfig cfg = build_config(raw);
    REQUIRE(cfg.ofdm.n_subcarriers == 128);

    // an overridden invalid value still fails validation
    RawConfig bad = parse_raw("[sweep]\nmethods = ls\n");
    apply_override(bad, "ofdm.cp_length=64");
    REQUIRE_THROWS_AS(build_config(bad), ConfigError);

    REQUIRE_THROWS_AS(apply_override(raw, "no_equals_sign"), ConfigError);
    REQUIRE_THROWS_AS(apply_override(raw, "made.up.key=1"), ConfigError);
}

TEST_CASE("config: pdp powers normalized, mismatch rejected") {
    const SweepConfig cfg = parse_config(
        "[channel]\npdp_delays = 0,1\npdp_powers = 3,1\n[sweep]\nmethods = ls\n");
    REQUIRE(cfg.channel.pdp.taps[0].power == Approx(0.75));
    REQUIRE(cfg.channel.pdp.taps[1].power == Approx(0.25));

    REQUIRE_THROWS_AS(
        parse_config("[channel]\npdp_delays = 0,1\npdp_powers = 1\n[sweep]\nmethods = ls\n"),
        ConfigError);
}

TEST_CASE("config: subspace needs block pilots and enough data symbols") {
    // comb default: rejected (iid-input assumption)
    REQUIRE_THROWS_AS(parse_config("[sweep]\nmethods = subspace\n"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_config("[ofdm]\npilot_type = block\n[sweep]\nmethods = subspace\n"
                     "symbols_per_trial = 10\n"
                     "[methods.subspace]\nblocks = 2\nsuperblocks = 400\n"),
        ConfigError);
    REQUIRE_NOTHROW(
        parse_config("[ofdm]\npilot_type = block\n[sweep]\nmethods = subspace\n"
                     "symbols_per_trial = 1001\n"
                     "[methods.subspace]\nblocks = 2\nsuperblocks = 400\n"));
}
