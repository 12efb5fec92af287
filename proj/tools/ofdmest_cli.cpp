// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: config-driven Monte Carlo sweeps, channel
// statistics probing and single-shot estimation dumps.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmest/channel/fading.hpp"
#include "ofdmest/cli/config.hpp"
#include "ofdmest/cli/svg.hpp"
#include "ofdmest/harness/results_io.hpp"
#include "ofdmest/harness/sweep.hpp"
#include "ofdmest/num/bessel.hpp"

namespace fs = std::filesystem;
using namespace ofdmest;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::size_t workers = 0;
    bool workers_set = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string svg = "on";
};

// Tracks files created by a command so a failure leaves no partial output.
class OutputSet {
  public:
    explicit OutputSet(const fs::path& dir) : dir_(dir) { fs::create_directories(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = path(name);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + p.string());
        created_.push_back(p);
    }

    void discard_all() {
        for (const fs::path& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        created_.clear();
    }

  private:
    fs::path dir_;
    std::vector<fs::path> created_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

harness::SweepConfig load_config(const CommonOpts& opts, cli::RawConfig* raw_out = nullptr) {
    cli::RawConfig raw = cli::parse_raw(read_file(opts.config_path));
    for (const std::string& ov : opts.overrides) cli::apply_override(raw, ov);
    harness::SweepConfig cfg = cli::build_config(raw);
    if (opts.seed_set) cfg.master_seed = opts.seed;
    if (opts.workers_set) cfg.n_workers = opts.workers;
    if (raw_out != nullptr) *raw_out = raw;
    return cfg;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const harness::MetricRecord* find_record(const harness::SweepResult& r, double snr,
                                         const std::string& method) {
    for (const auto& rec : r.records)
        if (rec.snr_db == snr && rec.method == method) return &rec;
    return nullptr;
}

double metric_of(const harness::MetricRecord& rec, const std::string& metric) {
    if (metric == "ber") return rec.ber;
    if (metric == "mse") return rec.mse;
    return rec.rmse;
}

int cmd_sweep(const CommonOpts& opts) {
    const harness::SweepConfig cfg = load_config(opts);
    const harness::SweepResult result = harness::run_sweep(cfg);

    OutputSet out(opts.out_dir);
    try {
        out.write("results.csv", harness::results_to_csv(result));
        out.write("results.json", harness::results_to_json(result));

        // one plot-data file per metric: snr_db column + one column per
        // method named in the config
        std::vector<std::string> methods;
        for (const auto& m : cfg.methods) methods.push_back(m.name());
        for (const std::string& metric : cfg.metrics) {
            std::ostringstream dat;
            dat << "snr_db";
            for (const auto& m : methods) dat << ' ' << m;
            dat << '\n';
            for (double snr : cfg.snr_grid_db) {
                dat << fmt(snr);
                for (const auto& m : methods) {
                    const auto* rec = find_record(result, snr, m);
                    dat << ' ' << fmt(rec != nullptr ? metric_of(*rec, metric) : 0.0);
                }
                dat << '\n';
            }
            out.write("plot_" + metric + ".dat", dat.str());

            if (opts.svg == "on") {
                std::vector<cli::SvgSeries> series;
                for (const auto& m : methods) {
                    cli::SvgSeries s;
                    s.label = m;
                    for (double snr : cfg.snr_grid_db) {
                        const auto* rec = find_record(result, snr, m);
                        if (rec == nullptr) continue;
                        s.x.push_back(snr);
                        s.y.push_back(metric_of(*rec, metric));
                    }
                    series.push_back(std::move(s));
                }
                out.write(metric + ".svg",
                          cli::render_svg_chart(metric + " vs SNR", "SNR (dB)", metric, series));
            }
        }
    } catch (...) {
        out.discard_all();
        throw;
    }
    std::cerr << "sweep complete: " << result.records.size() << " records in "
              << result.elapsed_seconds << " s -> " << opts.out_dir << "\n";
    return 0;
}

int cmd_probe_channel(const CommonOpts& opts) {
    cli::RawConfig raw;
    const harness::SweepConfig cfg = load_config(opts, &raw);
    const std::size_t n_sym = cli::probe_symbols(raw);
    const double fdt = cfg.channel.effective_doppler();

    channel::FadingSpec spec;
    spec.doppler_rate = fdt;
    spec.n_oscillators = cfg.channel.n_oscillators;
    spec.seed = cfg.master_seed;
    const auto real = channel::generate_fading(cfg.channel.effective_pdp(), spec, n_sym, 2);

    OutputSet out(opts.out_dir);
    try {
        std::ostringstream csv;
        csv << "lag,empirical_autocorr,j0_reference\n";
        double p0 = 0.0;
        for (std::size_t s = 0; s < n_sym; ++s) p0 += std::norm(real.tap_gains(s, 0));
        p0 /= double(n_sym);
        for (int lag = 0; lag <= 20; ++lag) {
            std::complex<double> acc = 0.0;
            for (std::size_t s = std::size_t(lag); s < n_sym; ++s)
                acc += real.tap_gains(s, 0) * std::conj(real.tap_gains(s - std::size_t(lag), 0));
            const double emp = (acc / double(n_sym - std::size_t(lag))).real() / p0;
            const double ref = num::bessel_j0(2.0 * num::kPi * fdt * double(lag));
            csv << lag << ',' << fmt(emp) << ',' << fmt(ref) << '\n';
        }
        out.write("probe.csv", csv.str());
    } catch (...) {
        out.discard_all();
        throw;
    }
    std::cerr << "channel probe -> " << opts.out_dir << "/probe.csv\n";
    return 0;
}

int cmd_estimate_once(const CommonOpts& opts) {
    const harness::SweepConfig cfg = load_config(opts);
    if (cfg.methods.size() != 1)
        throw ConfigError("estimate-once needs exactly one method in sweep.methods, got " +
                          std::to_string(cfg.methods.size()));
    const double snr = cfg.snr_grid_db.front();
    const auto bank = harness::detail::build_bank(cfg, snr, nullptr);
    const auto ctx = harness::detail::run_chain(cfg, bank.noise_var, 0, 0);
    const est::ChannelEstimate est =
        harness::detail::estimate_with_method(cfg, cfg.methods[0], bank, ctx).estimate;

    std::size_t sym = 0;
    while (sym < est.per_symbol_valid.size() && !est.per_symbol_valid[sym]) ++sym;
    if (sym == est.per_symbol_valid.size())
        throw std::runtime_error("method produced no valid symbol estimate");

    OutputSet out(opts.out_dir);
    try {
        std::ostringstream csv;
        csv << "k,H_true_re,H_true_im,H_hat_re,H_hat_im,abs_err\n";
        for (std::size_t k = 0; k < cfg.ofdm.n_subcarriers; ++k) {
            const auto ht = ctx.real.freq_response(sym, k);
            const auto hh = est.h_hat(sym, k);
            csv << k << ',' << fmt(ht.real()) << ',' << fmt(ht.imag()) << ',' << fmt(hh.real())
                << ',' << fmt(hh.imag()) << ',' << fmt(std::abs(hh - ht)) << '\n';
        }
        out.write("estimate.csv", csv.str());
    } catch (...) {
        out.discard_all();
        throw;
    }
    std::cerr << "single-shot estimate (method " << cfg.methods[0].name() << ", snr " << snr
              << " dB, symbol " << sym << ") -> " << opts.out_dir << "/estimate.csv\n";
    return 0;
}

int cmd_list_methods() {
    std::cout << "perfect        genie channel knowledge (reference baseline)\n"
              << "ls             least squares Y/X at pilot positions\n"
              << "  methods.ls.interp = linear|transform (comb mode)\n"
              << "lms            one-tap LMS tracker per pilot subcarrier (comb pilots)\n"
              << "  methods.lms.step = mu (default 0.1), methods.lms.interp\n"
              << "mmse           full MMSE from the known power-delay profile\n"
              << "  methods.mmse.interp (comb mode)\n"
              << "lmmse          simplified LMMSE smoothing of the LS estimate\n"
              << "  methods.lmmse.interp (comb mode)\n"
              << "lowrank        rank-p reduction of the LMMSE smoother\n"
              << "  methods.lowrank.rank = p (default 4), methods.lowrank.interp\n"
              << "ml             projection onto the N_h-tap signal subspace (block pilots)\n"
              << "  methods.ml.n_taps = N_h (default 16)\n"
              << "kalman         per-subcarrier scalar Kalman tracker (AR model)\n"
              << "  methods.kalman.order = p (default 2), methods.kalman.mode = "
                 "training|decision_feedback\n"
              << "kalman_vector  stacked vector Kalman tracker (AR order 1)\n"
              << "subspace       blind second-order subspace identification\n"
              << "  methods.subspace.blocks, methods.subspace.superblocks, "
                 "methods.subspace.channel_order\n";
    return 0;
}

} // namespace

const char* kConfigHelp = R"(Configuration file keys (sectioned key=value, '#' comments):
  [ofdm]     n_subcarriers (64)  cp_length (16)  constellation bpsk|qpsk|qam16 (qam16)
             pilot_type block|comb|none (comb)  pilot_period (5)  pilot_spacing (4)
  [channel]  type fading|identity (fading)  pdp_delays (0,1,2,3)
             pdp_powers list|exponential (exponential)  doppler f_d*T (0.01)
             oscillators (32)  correlation analytic|empirical (analytic)
             corr_train_symbols (200)  probe_symbols (100000, probe-channel only)
  [sweep]    methods (ls)  snr_db list or start:stop:step (0:30:5)  trials (500)
             symbols_per_trial (100)  seed (1)  noiseless (false)
             metrics ber,mse,rmse
  [methods.<name>]  per-method parameters, see list-methods
Overrides: --override section.key=value, applied before validation.)";

int main(int argc, char** argv) {
    CLI::App app{"OFDM channel-estimation benchmark suite"};
    app.require_subcommand(1);
    app.footer(kConfigHelp);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", opts.config_path, "configuration file")->required();
        sub->add_option("--out", opts.out_dir, "output directory (default .)");
        sub->add_option("--override", opts.overrides,
                        "config override section.key=value (repeatable)");
        sub->add_option("--workers", opts.workers, "worker thread cap (default: all cores)")
            ->each([&](const std::string&) { opts.workers_set = true; });
        sub->add_option("--seed", opts.seed, "master seed override")
            ->each([&](const std::string&) { opts.seed_set = true; });
        sub->add_option("--svg", opts.svg, "svg chart emission: on|off (default on)")
            ->check(CLI::IsMember({"on", "off"}));
    };

    CLI::App* sweep = app.add_subcommand("sweep", "run the Monte Carlo SNR sweep");
    add_common(sweep, true);
    CLI::App* probe = app.add_subcommand("probe-channel", "dump fading autocorrelation vs J0");
    add_common(probe, true);
    CLI::App* once = app.add_subcommand("estimate-once", "one trial, per-subcarrier dump");
    add_common(once, true);
    app.add_subcommand("list-methods", "list estimator tags and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // command-line problems are config errors
    }

    try {
        if (sweep->parsed()) return cmd_sweep(opts);
        if (probe->parsed()) return cmd_probe_channel(opts);
        if (once->parsed()) return cmd_estimate_once(opts);
        return cmd_list_methods();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}
