// modsamp: bound tables, single trials, sweeps and offline trace recovery.
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 contract violation (recover --strict).

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "modsamp/bounds.hpp"
#include "modsamp/config.hpp"
#include "modsamp/error.hpp"
#include "modsamp/harness.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/trace.hpp"

using namespace modsamp;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void print(std::ostream& os, bool csv) const
    {
        if (csv) {
            auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    os << (i ? "," : "") << r[i];
                os << '\n';
            };
            line(header);
            for (const auto& r : rows)
                line(r);
            return;
        }
        std::vector<std::size_t> w(header.size());
        for (std::size_t i = 0; i < header.size(); ++i)
            w[i] = header[i].size();
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i)
                w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "  " : "") << std::string(w[i] - r[i].size(), ' ') << r[i];
            os << '\n';
        };
        line(header);
        for (const auto& r : rows)
            line(r);
    }
};

std::string fmt(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// Evaluates f, printing "-" where the bound is infeasible.
std::string cell(const std::function<double()>& f, int digits = 2)
{
    try {
        return fmt(f(), digits);
    } catch (const InfeasibleError&) {
        return "-";
    }
}

Table preset_noise_levels()
{
    Table t{{"rho_eta", "N=2", "N=3", "baseline", "baseline_no_e"}, {}};
    const double rho = 10.0;
    for (double re : {0.10, 0.12, 0.14, 0.16, 0.18, 0.20}) {
        t.rows.push_back({fmt(re), cell([&] { return of_required(OfVariant::NoisyFixedN, {rho, re, 2}); }),
                          cell([&] { return of_required(OfVariant::NoisyFixedN, {rho, re, 3}); }),
                          cell([&] { return of_baseline_noisy(rho, re, true).of; }),
                          cell([&] { return of_baseline_noisy(rho, re, false).of; })});
    }
    return t;
}

Table preset_second_order()
{
    Table t{{"B_khz", "rho", "generic", "sinc"}, {}};
    const std::pair<double, double> rows[] = {{1, 20.50}, {10, 7.15}, {20, 7.20}, {20, 17.28}, {100, 5.92}};
    for (const auto& [b, rho] : rows) {
        t.rows.push_back({fmt(b, 0), fmt(rho), cell([&] { return of_required(OfVariant::RSoD, {rho, 0.0}); }),
                          cell([&] { return of_required(OfVariant::RSoDSinc, {rho, 0.0}); })});
    }
    return t;
}

struct BoundsArgs {
    std::string preset;
    std::string variant = "noisy";
    std::vector<double> rho{10.0};
    std::vector<double> rho_eta{0.0};
    std::vector<int> order{2};
    std::vector<int> bits{8};
    std::vector<double> nu{0.0};
    std::vector<double> of{10.0};
    std::string format = "text";
};

Table bounds_grid(const BoundsArgs& a)
{
    const std::string& v = a.variant;
    Table t;
    if (v == "noisy" || v == "quantized") {
        const bool q = v == "quantized";
        t.header = {"rho", q ? "bits" : "rho_eta", "order", "of"};
        for (double rho : a.rho)
            for (int n : a.order) {
                if (q) {
                    for (int b : a.bits)
                        t.rows.push_back({fmt(rho, 4), std::to_string(b), std::to_string(n), cell([&] {
                                              return of_required(OfVariant::Quantized, {rho, 0.0, n, b});
                                          }, 4)});
                } else {
                    for (double re : a.rho_eta)
                        t.rows.push_back({fmt(rho, 4), fmt(re, 4), std::to_string(n), cell([&] {
                                              return of_required(OfVariant::NoisyFixedN, {rho, re, n});
                                          }, 4)});
                }
            }
    } else if (v == "rsod" || v == "rsod_sinc") {
        t.header = {"rho", "rho_eta", "of"};
        const auto var = v == "rsod" ? OfVariant::RSoD : OfVariant::RSoDSinc;
        for (double rho : a.rho)
            for (double re : a.rho_eta)
                t.rows.push_back({fmt(rho, 4), fmt(re, 4), cell([&] { return of_required(var, {rho, re}); }, 4)});
    } else if (v == "baseline" || v == "baseline_no_e") {
        t.header = {"rho", "rho_eta", "alpha", "of"};
        for (double rho : a.rho)
            for (double re : a.rho_eta) {
                try {
                    const auto b = of_baseline_noisy(rho, re, v == "baseline");
                    t.rows.push_back({fmt(rho, 4), fmt(re, 4), std::to_string(b.alpha), fmt(b.of, 4)});
                } catch (const InfeasibleError&) {
                    t.rows.push_back({fmt(rho, 4), fmt(re, 4), "-", "-"});
                }
            }
    } else if (v == "jitter" || v == "jitter_sinc") {
        t.header = {"rho", "rho_eta", "nu", "of"};
        const auto mode = v == "jitter" ? JitterMode::Generic : JitterMode::Sinc;
        for (double rho : a.rho)
            for (double re : a.rho_eta)
                for (double nu : a.nu)
                    t.rows.push_back({fmt(rho, 4), fmt(re, 4), fmt(nu, 6),
                                      cell([&] { return of_jitter(rho, re, nu, mode); }, 4)});
    } else if (v == "nmin" || v == "nmin_baseline") {
        t.header = {"rho", "of", "nmin"};
        const auto mode = v == "nmin" ? NminMode::Revised : NminMode::Baseline;
        for (double rho : a.rho)
            for (double of : a.of) {
                std::string n = "-";
                try {
                    n = std::to_string(nmin(rho, of, mode));
                } catch (const InfeasibleError&) {
                }
                t.rows.push_back({fmt(rho, 4), fmt(of, 4), n});
            }
    } else if (v == "sinad_gain") {
        t.header = {"rho", "delta_sinad_db", "delta_enob_bits"};
        for (double rho : a.rho) {
            const auto g = sinad_gain_theory(rho);
            t.rows.push_back({fmt(rho, 4), fmt(g.sinad_db, 4), fmt(g.enob_bits, 4)});
        }
    } else {
        throw ConfigError("unknown bound variant '" + v + "'");
    }
    return t;
}

TraceMeta resolve_meta(const std::string& sidecar, double lambda, double fs)
{
    TraceMeta m;
    if (!sidecar.empty())
        m = read_sidecar(sidecar);
    if (lambda > 0.0)
        m.lambda = lambda;
    if (fs > 0.0)
        m.fs = fs;
    if (sidecar.empty() && (!(lambda > 0.0) || !(fs > 0.0)))
        throw ConfigError("give --sidecar or both --lambda and --fs");
    return m;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Modulo sampling: bounds, simulation, sweeps and trace recovery"};
    app.require_subcommand(1);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Tabulate oversampling / order bounds over a parameter grid");
    bounds->add_option("--preset", ba.preset, "noise-levels | second-order")->check(CLI::IsMember({"noise-levels", "second-order"}));
    bounds->add_option("--variant", ba.variant,
                       "noisy | quantized | rsod | rsod_sinc | baseline | baseline_no_e | jitter | jitter_sinc | "
                       "nmin | nmin_baseline | sinad_gain");
    bounds->add_option("--rho", ba.rho, "amplitude factors")->expected(1, -1)->delimiter(',');
    bounds->add_option("--rho-eta", ba.rho_eta, "noise levels")->expected(1, -1)->delimiter(',');
    bounds->add_option("--order", ba.order, "difference orders")->expected(1, -1)->delimiter(',');
    bounds->add_option("--bits", ba.bits, "quantizer bits")->expected(1, -1)->delimiter(',');
    bounds->add_option("--nu", ba.nu, "jitter levels")->expected(1, -1)->delimiter(',');
    bounds->add_option("--of", ba.of, "oversampling factors (nmin)")->expected(1, -1)->delimiter(',');
    bounds->add_option("--format", ba.format, "text | csv")->check(CLI::IsMember({"text", "csv"}));

    std::string config_path;
    std::string trace_out;
    std::optional<std::uint64_t> seed;
    auto* simulate = app.add_subcommand("simulate", "Run one trial and print its metrics as JSON");
    simulate->add_option("--config", config_path, "experiment JSON")->required();
    simulate->add_option("--seed", seed, "trial seed (default: channel.seed)");
    simulate->add_option("--trace-out", trace_out, "also write the folded samples as a trace CSV");

    std::string csv_out;
    std::string json_out;
    unsigned parallelism = 1;
    std::optional<std::uint64_t> base_seed;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one or two axes");
    sweep->add_option("--config", config_path, "experiment JSON with a sweep section")->required();
    sweep->add_option("--out", csv_out, "CSV destination (default stdout)");
    sweep->add_option("--json", json_out, "JSON summary destination");
    sweep->add_option("--parallelism,-j", parallelism, "worker threads")->check(CLI::Range(1u, 256u));
    sweep->add_option("--base-seed", base_seed, "override sweep.base_seed");

    std::string trace_path;
    std::string sidecar;
    double lambda = 0.0;
    double fs = 0.0;
    double slack = 0.05;
    std::string recovered_out;
    bool strict = false;
    std::optional<double> beta_g;
    std::optional<int> order;
    auto* recover = app.add_subcommand("recover", "Unwrap a folded trace");
    recover->add_option("--trace", trace_path, "trace CSV")->required();
    recover->add_option("--config", config_path, "recovery JSON (bare object or full config)");
    recover->add_option("--sidecar", sidecar, "JSON with lambda and fs");
    recover->add_option("--lambda", lambda, "folding threshold");
    recover->add_option("--fs", fs, "nominal sampling rate, Hz");
    recover->add_option("--beta-g", beta_g, "amplitude bound");
    recover->add_option("--order", order, "difference order");
    recover->add_option("--slack", slack, "fold-range slack as a fraction of lambda");
    recover->add_option("--out", recovered_out, "recovered CSV destination (default stdout)");
    recover->add_flag("--strict", strict, "exit 4 when the unwrap fails its consistency check");

    auto* ingest = app.add_subcommand("ingest", "Validate a trace file");
    ingest->add_option("--trace", trace_path, "trace CSV")->required();
    ingest->add_option("--sidecar", sidecar, "JSON with lambda and fs");
    ingest->add_option("--lambda", lambda, "folding threshold");
    ingest->add_option("--fs", fs, "nominal sampling rate, Hz");
    ingest->add_option("--slack", slack, "fold-range slack as a fraction of lambda");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bounds->parsed()) {
            Table t;
            if (ba.preset == "noise-levels")
                t = preset_noise_levels();
            else if (ba.preset == "second-order")
                t = preset_second_order();
            else
                t = bounds_grid(ba);
            t.print(std::cout, ba.format == "csv");
        } else if (simulate->parsed()) {
            const auto cfg = load_config(config_path);
            const auto r = run_trial(cfg.signal, cfg.channel, cfg.recovery, seed.value_or(cfg.channel.seed),
                                     cfg.success_rule);
            std::cout << report_json(r) << '\n';
            if (!trace_out.empty()) {
                const SampledSignal folded{r.measured, r.grid, 0.0, cfg.channel.lambda};
                emit_trace(trace_out, folded, &r.truth);
            }
        } else if (sweep->parsed()) {
            const auto cfg = load_config(config_path);
            if (!cfg.sweep)
                throw ConfigError("config has no sweep section");
            SweepSpec spec = *cfg.sweep;
            if (base_seed)
                spec.base_seed = *base_seed;
            const auto result = run_sweep(spec, parallelism);
            write_text(csv_out, to_csv(result));
            if (!json_out.empty())
                write_text(json_out, to_json(result) + "\n");
        } else if (recover->parsed()) {
            const TraceMeta meta = resolve_meta(sidecar, lambda, fs);
            IngestOptions opt;
            opt.slack = slack;
            const auto trace = ingest_trace(trace_path, meta, opt);
            RecoveryConfig rc;
            rc.lambda = meta.lambda;
            rc.beta_g = 0.0;
            if (!config_path.empty())
                rc = load_recovery_config(config_path, meta.lambda);
            if (beta_g)
                rc.beta_g = *beta_g;
            if (order)
                rc.order = *order;
            if (!(rc.beta_g > 0.0))
                throw ConfigError("recover needs an amplitude bound: set beta_g or --beta-g");
            const Sequence y(trace.folded.values);
            const auto rec = trace.folded.grid.is_uniform() ? recover_fixed_order(y, rc)
                                                            : recover_jitter_n2(y, trace.folded.grid, rc);
            std::ostringstream os;
            os << "time_s,unfolded_v,valid\n";
            char buf[96];
            for (long k = rec.unfolded.origin; k < rec.unfolded.end_index(); ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", trace.folded.grid.instant(static_cast<std::size_t>(k)),
                              rec.unfolded.at_index(k), rec.valid_window.contains(k) ? 1 : 0);
                os << buf;
            }
            write_text(recovered_out, os.str());
            std::cerr << "block_length=" << rec.block_length << " valid=[" << rec.valid_window.begin << ","
                      << rec.valid_window.end << ") consistent=" << (rec.success ? "yes" : "no") << '\n';
            if (!rec.success)
                std::cerr << rec.diagnostic << '\n';
            if (trace.reference) {
                const Alignment al = align_2lambda(rec.unfolded, Sequence(trace.reference->values), meta.lambda);
                std::vector<double> est;
                std::vector<double> ref;
                for (long k = rec.valid_window.begin; k < rec.valid_window.end; ++k) {
                    est.push_back(al.aligned.at_index(k));
                    ref.push_back(trace.reference->values[static_cast<std::size_t>(k)]);
                }
                std::cerr << "snr_r_db=" << snr_r(ref, est) << " global_m=" << al.m << '\n';
            }
            if (strict && !rec.success)
                throw ContractViolation("unwrap failed its consistency check");
        } else if (ingest->parsed()) {
            const TraceMeta meta = resolve_meta(sidecar, lambda, fs);
            IngestOptions opt;
            opt.slack = slack;
            const auto trace = ingest_trace(trace_path, meta, opt);
            const auto& g = trace.folded.grid;
            std::cout << "samples=" << g.count << " lambda=" << meta.lambda << " fs=" << meta.fs
                      << " grid=" << (g.is_uniform() ? "uniform" : "jittered");
            if (!g.is_uniform())
                std::cout << " nu=" << g.jitter;
            std::cout << " reference=" << (trace.reference ? "yes" : "no") << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const RankDeficientError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
