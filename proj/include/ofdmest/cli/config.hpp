// SPDX-License-Identifier: Apache-2.0
//
// Sectioned key=value sweep configuration. Sections: [ofdm], [channel],
// [sweep], [methods.<name>]. '#' starts a comment. Unknown sections or keys
// are rejected, never ignored; every validation failure names the offending
// key and the violated constraint. Overrides ("section.key=value") apply
// after file parsing and before validation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ofdmest/errors.hpp"
#include "ofdmest/harness/sweep.hpp"

namespace ofdmest::cli {

using harness::ChannelConfig;
using harness::Method;
using harness::MethodSpec;
using harness::SweepConfig;

struct RawConfig {
    std::map<std::string, std::string> values; // "section.key" -> value
    std::map<std::string, int> lines;          // for diagnostics
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "ofdm.n_subcarriers", "ofdm.cp_length", "ofdm.constellation", "ofdm.pilot_type",
        "ofdm.pilot_period", "ofdm.pilot_spacing",
        "channel.type", "channel.pdp_delays", "channel.pdp_powers", "channel.doppler",
        "channel.oscillators", "channel.correlation", "channel.corr_train_symbols",
        "channel.probe_symbols",
        "sweep.methods", "sweep.snr_db", "sweep.trials", "sweep.symbols_per_trial",
        "sweep.seed", "sweep.noiseless", "sweep.metrics",
        "methods.lowrank.rank", "methods.ml.n_taps", "methods.kalman.order",
        "methods.kalman.mode", "methods.lms.step", "methods.subspace.blocks",
        "methods.subspace.superblocks", "methods.subspace.channel_order",
        // per-method comb interpolation choice
        "methods.ls.interp", "methods.mmse.interp", "methods.lmmse.interp",
        "methods.lowrank.interp", "methods.lms.interp",
    };
    return keys;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream ss(value);
    T out;
    ss >> out;
    if (ss.fail() || !ss.eof())
        throw ConfigError(key + ": cannot parse '" + value + "' as a number");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

// "0:30:5" inclusive range or a comma list
inline std::vector<double> parse_snr_grid(const std::string& value) {
    if (value.find(':') != std::string::npos) {
        const auto parts = [&] {
            std::vector<std::string> p;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ':')) p.push_back(trim(item));
            return p;
        }();
        if (parts.size() != 3)
            throw ConfigError("sweep.snr_db: range form is start:stop:step, got '" + value + "'");
        const double start = parse_number<double>("sweep.snr_db", parts[0]);
        const double stop = parse_number<double>("sweep.snr_db", parts[1]);
        const double step = parse_number<double>("sweep.snr_db", parts[2]);
        if (!(step > 0.0)) throw ConfigError("sweep.snr_db: step must be > 0");
        std::vector<double> grid;
        for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
        return grid;
    }
    std::vector<double> grid;
    for (const std::string& s : split_list(value))
        grid.push_back(parse_number<double>("sweep.snr_db", s));
    return grid;
}

} // namespace detail

/// Syntax pass: sections, key=value pairs, comments. Line numbers retained.
inline RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header",
                                  line_no);
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name",
                                  line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                                  line + "'",
                              line_no);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key", line_no);
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                                  "' outside any [section]",
                              line_no);
        const std::string full = section + "." + key;
        if (detail::known_keys().count(full) == 0)
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + full + "'",
                              line_no);
        raw.values[full] = value;
        raw.lines[full] = line_no;
    }
    return raw;
}

/// Apply one "section.key=value" override (post-parse, pre-validation).
inline void apply_override(RawConfig& raw, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    const std::string key = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    if (detail::known_keys().count(key) == 0)
        throw ConfigError("override: unknown key '" + key + "'");
    raw.values[key] = value;
}

/// Extra knob consumed by probe-channel only.
inline std::size_t probe_symbols(const RawConfig& raw) {
    const auto it = raw.values.find("channel.probe_symbols");
    if (it == raw.values.end()) return 100000;
    return detail::parse_number<std::size_t>("channel.probe_symbols", it->second);
}

/// Semantic pass: defaults, typed parsing, cross-key validation.
inline SweepConfig build_config(const RawConfig& raw) {
    using detail::parse_number;
    SweepConfig cfg; // carries the documented defaults
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = raw.values.find(key);
        return it == raw.values.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("ofdm.n_subcarriers"))
        cfg.ofdm.n_subcarriers = parse_number<std::size_t>("ofdm.n_subcarriers", *v);
    if (const auto* v = get("ofdm.cp_length"))
        cfg.ofdm.cp_length = parse_number<std::size_t>("ofdm.cp_length", *v);
    if (const auto* v = get("ofdm.constellation")) {
        if (*v == "bpsk")
            cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::BPSK);
        else if (*v == "qpsk")
            cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::QPSK);
        else if (*v == "qam16")
            cfg.ofdm.constellation = modem::Constellation(modem::ConstellationKind::QAM16);
        else
            throw ConfigError("ofdm.constellation: expected bpsk|qpsk|qam16, got '" + *v + "'");
    }
    if (const auto* v = get("ofdm.pilot_type")) {
        if (*v == "block")
            cfg.ofdm.pilots.kind = modem::PilotKind::Block;
        else if (*v == "comb")
            cfg.ofdm.pilots.kind = modem::PilotKind::Comb;
        else if (*v == "none")
            cfg.ofdm.pilots.kind = modem::PilotKind::None;
        else
            throw ConfigError("ofdm.pilot_type: expected block|comb|none, got '" + *v + "'");
    }
    if (const auto* v = get("ofdm.pilot_period"))
        cfg.ofdm.pilots.period = parse_number<int>("ofdm.pilot_period", *v);
    if (const auto* v = get("ofdm.pilot_spacing"))
        cfg.ofdm.pilots.spacing = parse_number<int>("ofdm.pilot_spacing", *v);

    if (const auto* v = get("channel.type")) {
        if (*v == "fading")
            cfg.channel.type = ChannelConfig::Type::Fading;
        else if (*v == "identity")
            cfg.channel.type = ChannelConfig::Type::Identity;
        else
            throw ConfigError("channel.type: expected fading|identity, got '" + *v + "'");
    }
    {
        std::vector<std::size_t> delays = {0, 1, 2, 3};
        if (const auto* v = get("channel.pdp_delays")) {
            delays.clear();
            for (const std::string& s : detail::split_list(*v))
                delays.push_back(parse_number<std::size_t>("channel.pdp_delays", s));
            if (delays.empty()) throw ConfigError("channel.pdp_delays: empty list");
        }
        const auto* pv = get("channel.pdp_powers");
        channel::PowerDelayProfile pdp;
        if (pv == nullptr || *pv == "exponential") {
            double sum = 0.0;
            for (std::size_t i = 0; i < delays.size(); ++i) sum += std::exp(-double(i) / 2.0);
            for (std::size_t i = 0; i < delays.size(); ++i)
                pdp.taps.push_back({delays[i], std::exp(-double(i) / 2.0) / sum});
        } else {
            std::vector<double> powers;
            for (const std::string& s : detail::split_list(*pv))
                powers.push_back(parse_number<double>("channel.pdp_powers", s));
            if (powers.size() != delays.size())
                throw ConfigError("channel.pdp_powers: " + std::to_string(powers.size()) +
                                  " powers for " + std::to_string(delays.size()) +
                                  " channel.pdp_delays entries");
            double sum = 0.0;
            for (double p : powers) {
                if (!(p > 0.0)) throw ConfigError("channel.pdp_powers: powers must be > 0");
                sum += p;
            }
            for (std::size_t i = 0; i < delays.size(); ++i)
                pdp.taps.push_back({delays[i], powers[i] / sum}); // normalized to sum 1
        }
        cfg.channel.pdp = pdp;
    }
    if (const auto* v = get("channel.doppler"))
        cfg.channel.doppler_rate = parse_number<double>("channel.doppler", *v);
    if (const auto* v = get("channel.oscillators"))
        cfg.channel.n_oscillators = parse_number<int>("channel.oscillators", *v);
    if (const auto* v = get("channel.correlation")) {
        if (*v == "analytic")
            cfg.channel.empirical_correlation = false;
        else if (*v == "empirical")
            cfg.channel.empirical_correlation = true;
        else
            throw ConfigError("channel.correlation: expected analytic|empirical, got '" + *v +
                              "'");
    }
    if (const auto* v = get("channel.corr_train_symbols"))
        cfg.channel.corr_train_symbols =
            parse_number<std::size_t>("channel.corr_train_symbols", *v);

    std::vector<std::string> method_names = {"ls"};
    if (const auto* v = get("sweep.methods")) {
        method_names = detail::split_list(*v);
        if (method_names.empty()) throw ConfigError("sweep.methods: empty list");
    }
    if (const auto* v = get("sweep.snr_db")) cfg.snr_grid_db = detail::parse_snr_grid(*v);
    if (const auto* v = get("sweep.trials"))
        cfg.n_trials = parse_number<std::size_t>("sweep.trials", *v);
    if (const auto* v = get("sweep.symbols_per_trial"))
        cfg.n_symbols_per_trial = parse_number<std::size_t>("sweep.symbols_per_trial", *v);
    if (const auto* v = get("sweep.seed"))
        cfg.master_seed = parse_number<std::uint64_t>("sweep.seed", *v);
    if (const auto* v = get("sweep.noiseless"))
        cfg.noiseless = detail::parse_bool("sweep.noiseless", *v);
    if (const auto* v = get("sweep.metrics")) {
        cfg.metrics = detail::split_list(*v);
        for (const std::string& m : cfg.metrics)
            if (m != "ber" && m != "mse" && m != "rmse")
                throw ConfigError("sweep.metrics: unknown metric '" + m + "'");
        if (cfg.metrics.empty()) throw ConfigError("sweep.metrics: empty list");
    }

    cfg.methods.clear();
    std::set<std::string> named(method_names.begin(), method_names.end());
    for (const std::string& name : method_names) {
        const auto parsed = harness::method_from_name(name);
        if (!parsed) throw ConfigError("sweep.methods: unknown method '" + name + "'");
        MethodSpec spec;
        spec.method = *parsed;
        auto mkey = [&](const std::string& k) { return "methods." + name + "." + k; };
        if (const auto* v = get(mkey("rank")))
            spec.rank = parse_number<std::size_t>(mkey("rank"), *v);
        if (const auto* v = get(mkey("n_taps")))
            spec.ml_taps = parse_number<std::size_t>(mkey("n_taps"), *v);
        if (const auto* v = get(mkey("order")))
            spec.ar_order = parse_number<int>(mkey("order"), *v);
        if (const auto* v = get(mkey("mode"))) {
            if (*v == "training")
                spec.decision_feedback = false;
            else if (*v == "decision_feedback")
                spec.decision_feedback = true;
            else
                throw ConfigError(mkey("mode") + ": expected training|decision_feedback");
        }
        if (const auto* v = get(mkey("step")))
            spec.lms_step = parse_number<double>(mkey("step"), *v);
        if (const auto* v = get(mkey("interp"))) {
            if (*v == "linear")
                spec.interp = est::InterpMethod::Linear;
            else if (*v == "transform")
                spec.interp = est::InterpMethod::Transform;
            else
                throw ConfigError(mkey("interp") + ": expected linear|transform");
        }
        if (const auto* v = get(mkey("blocks")))
            spec.sub_blocks = parse_number<std::size_t>(mkey("blocks"), *v);
        if (const auto* v = get(mkey("superblocks")))
            spec.sub_superblocks = parse_number<std::size_t>(mkey("superblocks"), *v);
        if (const auto* v = get(mkey("channel_order")))
            spec.sub_order = parse_number<std::size_t>(mkey("channel_order"), *v);
        cfg.methods.push_back(spec);
    }
    // a [methods.X] section for a method that is not in the sweep is a mistake
    for (const auto& [key, value] : raw.values) {
        if (key.rfind("methods.", 0) != 0) continue;
        const auto dot = key.find('.', 8);
        const std::string owner = key.substr(8, dot - 8);
        if (named.count(owner) == 0)
            throw ConfigError("'" + key + "' configured but '" + owner +
                              "' is not in sweep.methods");
    }

    // named cross-key constraints, then the full semantic validation
    if (cfg.ofdm.cp_length >= cfg.ofdm.n_subcarriers)
        throw ConfigError("ofdm.cp_length must be < ofdm.n_subcarriers (cp_length=" +
                          std::to_string(cfg.ofdm.cp_length) +
                          ", n_subcarriers=" + std::to_string(cfg.ofdm.n_subcarriers) + ")");
    if (cfg.ofdm.pilots.kind == modem::PilotKind::Comb &&
        (cfg.ofdm.pilots.spacing < 2 ||
         cfg.ofdm.n_subcarriers % std::size_t(cfg.ofdm.pilots.spacing) != 0))
        throw ConfigError("ofdm.pilot_spacing must divide ofdm.n_subcarriers (spacing=" +
                          std::to_string(cfg.ofdm.pilots.spacing) +
                          ", n_subcarriers=" + std::to_string(cfg.ofdm.n_subcarriers) + ")");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

/// Text in, validated SweepConfig out.
inline SweepConfig parse_config(const std::string& text) { return build_config(parse_raw(text)); }

} // namespace ofdmest::cli
