// SPDX-License-Identifier: Apache-2.0
//
// Result serialization. CSV pins the column contract exactly
// (snr_db,method,ber,mse,rmse,trials,bit_count; doubles at 17 significant
// digits); the JSON form carries the whole SweepResult including the config
// echo and round-trips losslessly.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ofdmest/harness/sweep.hpp"

namespace ofdmest::harness {

enum class ResultFormat { Csv, Json };

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string results_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "snr_db,method,ber,mse,rmse,trials,bit_count\n";
    for (const MetricRecord& r : result.records) {
        out << detail::fmt_g17(r.snr_db) << ',' << r.method << ',' << detail::fmt_g17(r.ber)
            << ',' << detail::fmt_g17(r.mse) << ',' << detail::fmt_g17(r.rmse) << ',' << r.trials
            << ',' << r.bit_count << '\n';
    }
    return out.str();
}

namespace detail {

inline nlohmann::json method_to_json(const MethodSpec& m) {
    return nlohmann::json{
        {"method", m.name()},
        {"rank", m.rank},
        {"ml_taps", m.ml_taps},
        {"ar_order", m.ar_order},
        {"decision_feedback", m.decision_feedback},
        {"lms_step", m.lms_step},
        {"interp", m.interp == est::InterpMethod::Linear ? "linear" : "transform"},
        {"sub_blocks", m.sub_blocks},
        {"sub_superblocks", m.sub_superblocks},
        {"sub_order", m.sub_order},
    };
}

inline MethodSpec method_from_json(const nlohmann::json& j) {
    MethodSpec m;
    const auto name = j.at("method").get<std::string>();
    const auto parsed = method_from_name(name);
    if (!parsed) throw std::runtime_error("unknown method in results file: " + name);
    m.method = *parsed;
    m.rank = j.at("rank").get<std::size_t>();
    m.ml_taps = j.at("ml_taps").get<std::size_t>();
    m.ar_order = j.at("ar_order").get<int>();
    m.decision_feedback = j.at("decision_feedback").get<bool>();
    m.lms_step = j.at("lms_step").get<double>();
    m.interp = j.at("interp").get<std::string>() == "linear" ? est::InterpMethod::Linear
                                                             : est::InterpMethod::Transform;
    m.sub_blocks = j.at("sub_blocks").get<std::size_t>();
    m.sub_superblocks = j.at("sub_superblocks").get<std::size_t>();
    m.sub_order = j.at("sub_order").get<std::size_t>();
    return m;
}

inline nlohmann::json config_to_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["ofdm"] = {
        {"n_subcarriers", cfg.ofdm.n_subcarriers},
        {"cp_length", cfg.ofdm.cp_length},
        {"constellation", cfg.ofdm.constellation.name()},
        {"pilot_kind", cfg.ofdm.pilots.kind == modem::PilotKind::Block   ? "block"
                       : cfg.ofdm.pilots.kind == modem::PilotKind::Comb ? "comb"
                                                                        : "none"},
        {"pilot_period", cfg.ofdm.pilots.period},
        {"pilot_spacing", cfg.ofdm.pilots.spacing},
    };
    nlohmann::json taps = nlohmann::json::array();
    for (const auto& t : cfg.channel.pdp.taps)
        taps.push_back({{"delay", t.delay}, {"power", t.power}});
    j["channel"] = {
        {"type", cfg.channel.type == ChannelConfig::Type::Identity ? "identity" : "fading"},
        {"pdp", taps},
        {"doppler", cfg.channel.doppler_rate},
        {"oscillators", cfg.channel.n_oscillators},
        {"empirical_correlation", cfg.channel.empirical_correlation},
        {"corr_train_symbols", cfg.channel.corr_train_symbols},
    };
    nlohmann::json methods = nlohmann::json::array();
    for (const MethodSpec& m : cfg.methods) methods.push_back(method_to_json(m));
    j["methods"] = methods;
    j["snr_grid_db"] = cfg.snr_grid_db;
    j["n_trials"] = cfg.n_trials;
    j["n_symbols_per_trial"] = cfg.n_symbols_per_trial;
    j["master_seed"] = cfg.master_seed;
    j["noiseless"] = cfg.noiseless;
    j["metrics"] = cfg.metrics;
    j["n_workers"] = cfg.n_workers;
    return j;
}

inline SweepConfig config_from_json(const nlohmann::json& j) {
    SweepConfig cfg;
    const auto& jo = j.at("ofdm");
    cfg.ofdm.n_subcarriers = jo.at("n_subcarriers").get<std::size_t>();
    cfg.ofdm.cp_length = jo.at("cp_length").get<std::size_t>();
    const auto cname = jo.at("constellation").get<std::string>();
    cfg.ofdm.constellation =
        modem::Constellation(cname == "bpsk"   ? modem::ConstellationKind::BPSK
                             : cname == "qpsk" ? modem::ConstellationKind::QPSK
                                               : modem::ConstellationKind::QAM16);
    const auto pk = jo.at("pilot_kind").get<std::string>();
    cfg.ofdm.pilots.kind = pk == "block"  ? modem::PilotKind::Block
                           : pk == "comb" ? modem::PilotKind::Comb
                                          : modem::PilotKind::None;
    cfg.ofdm.pilots.period = jo.at("pilot_period").get<int>();
    cfg.ofdm.pilots.spacing = jo.at("pilot_spacing").get<int>();

    const auto& jc = j.at("channel");
    cfg.channel.type = jc.at("type").get<std::string>() == "identity"
                           ? ChannelConfig::Type::Identity
                           : ChannelConfig::Type::Fading;
    cfg.channel.pdp.taps.clear();
    for (const auto& t : jc.at("pdp"))
        cfg.channel.pdp.taps.push_back(
            {t.at("delay").get<std::size_t>(), t.at("power").get<double>()});
    cfg.channel.doppler_rate = jc.at("doppler").get<double>();
    cfg.channel.n_oscillators = jc.at("oscillators").get<int>();
    cfg.channel.empirical_correlation = jc.at("empirical_correlation").get<bool>();
    cfg.channel.corr_train_symbols = jc.at("corr_train_symbols").get<std::size_t>();

    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(method_from_json(m));
    cfg.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    cfg.n_trials = j.at("n_trials").get<std::size_t>();
    cfg.n_symbols_per_trial = j.at("n_symbols_per_trial").get<std::size_t>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.noiseless = j.at("noiseless").get<bool>();
    cfg.metrics = j.at("metrics").get<std::vector<std::string>>();
    cfg.n_workers = j.at("n_workers").get<std::size_t>();
    return cfg;
}

} // namespace detail

inline std::string results_to_json(const SweepResult& result) {
    nlohmann::json j;
    j["config"] = detail::config_to_json(result.config_echo);
    j["elapsed_seconds"] = result.elapsed_seconds;
    nlohmann::json recs = nlohmann::json::array();
    for (const MetricRecord& r : result.records) {
        recs.push_back({
            {"snr_db", r.snr_db},
            {"method", r.method},
            {"ber", r.ber},
            {"mse", r.mse},
            {"rmse", r.rmse},
            {"trials", r.trials},
            {"bit_count", r.bit_count},
        });
    }
    j["records"] = recs;
    return j.dump(2) + "\n";
}

inline SweepResult results_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepResult r;
    r.config_echo = detail::config_from_json(j.at("config"));
    r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    for (const auto& jr : j.at("records")) {
        MetricRecord rec;
        rec.snr_db = jr.at("snr_db").get<double>();
        rec.method = jr.at("method").get<std::string>();
        rec.ber = jr.at("ber").get<double>();
        rec.mse = jr.at("mse").get<double>();
        rec.rmse = jr.at("rmse").get<double>();
        rec.trials = jr.at("trials").get<std::uint64_t>();
        rec.bit_count = jr.at("bit_count").get<std::uint64_t>();
        r.records.push_back(rec);
    }
    return r;
}

/// Write a result file; `path` must be writable.
inline void write_results(const SweepResult& result, const std::string& path,
                          ResultFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_results: cannot open " + path);
    out << (format == ResultFormat::Csv ? results_to_csv(result) : results_to_json(result));
    if (!out) throw std::runtime_error("write_results: write failed for " + path);
}

} // namespace ofdmest::harness
