#include "modsamp/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "modsamp/error.hpp"
#include "modsamp/trace.hpp"

namespace modsamp {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

NoiseModel parse_noise(const json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "none")
            return NoNoise{};
        throw ConfigError("channel.noise: only \"none\" may be given as a bare string");
    }
    const auto model = j.at("model").get<std::string>();
    if (model == "none") {
        check_keys(j, {"model"}, "channel.noise");
        return NoNoise{};
    }
    if (model == "uniform") {
        check_keys(j, {"model", "rho_eta"}, "channel.noise");
        return UniformNoise{j.at("rho_eta").get<double>()};
    }
    if (model == "gaussian") {
        check_keys(j, {"model", "sigma"}, "channel.noise");
        return GaussianNoise{j.at("sigma").get<double>()};
    }
    if (model == "gaussian_snr") {
        check_keys(j, {"model", "snr_db"}, "channel.noise");
        return GaussianSnrNoise{j.at("snr_db").get<double>()};
    }
    throw ConfigError("channel.noise: unknown model '" + model + "'");
}

ChannelConfig parse_channel(const json& j)
{
    check_keys(j, {"lambda", "bits", "noise", "insertion", "seed", "oversampling", "jitter"}, "channel");
    ChannelConfig c;
    c.lambda = get_or(j, "lambda", c.lambda);
    if (j.contains("bits") && !j.at("bits").is_null())
        c.bits = j.at("bits").get<int>();
    if (j.contains("noise"))
        c.noise = parse_noise(j.at("noise"));
    const auto ins = get_or<std::string>(j, "insertion", "post_fold");
    if (ins == "post_fold")
        c.insertion = NoiseInsertion::PostFold;
    else if (ins == "pre_fold")
        c.insertion = NoiseInsertion::PreFold;
    else
        throw ConfigError("channel.insertion must be post_fold or pre_fold");
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.oversampling = get_or(j, "oversampling", c.oversampling);
    c.jitter = get_or(j, "jitter", c.jitter);
    validate(c);
    return c;
}

struct SignalParse {
    SignalSpec spec;
    std::optional<double> rho;
};

SignalParse parse_signal(const json& j, const std::string& base_dir)
{
    SignalParse out;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sinc_mixture") {
        check_keys(j, {"kind", "bandwidth_hz", "shifts", "coeffs", "random_coeffs", "start", "duration", "rho", "peak"},
                   "signal");
        SincMixture m;
        m.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        m.shifts = j.at("shifts").get<std::vector<double>>();
        m.random_coeffs = get_or(j, "random_coeffs", false);
        if (!m.random_coeffs)
            m.coeffs = j.at("coeffs").get<std::vector<double>>();
        out.spec.kind = m;
        out.spec.start = j.at("start").get<double>();
        out.spec.duration = j.at("duration").get<double>();
    } else if (kind == "random_sinc_mixture") {
        check_keys(j, {"kind", "bandwidth_hz", "terms", "duration", "rho", "peak"}, "signal");
        const auto terms = get_or<int>(j, "terms", 6);
        if (terms < 1)
            throw ConfigError("signal.terms must be >= 1");
        out.spec = random_sinc_mixture_spec(j.at("bandwidth_hz").get<double>(), get_or(j, "duration", 25.0),
                                            static_cast<std::size_t>(terms));
    } else if (kind == "tone") {
        check_keys(j, {"kind", "freq_hz", "amplitude", "phase", "start", "duration", "rho", "peak"}, "signal");
        Tone t;
        t.freq_hz = j.at("freq_hz").get<double>();
        t.amplitude = get_or(j, "amplitude", 1.0);
        t.phase = get_or(j, "phase", 0.0);
        out.spec.kind = t;
        out.spec.start = get_or(j, "start", 0.0);
        out.spec.duration = j.at("duration").get<double>();
    } else if (kind == "tabulated") {
        check_keys(j, {"kind", "path", "bandwidth_hz", "start", "duration", "rho", "peak"}, "signal");
        std::filesystem::path p = j.at("path").get<std::string>();
        if (p.is_relative())
            p = std::filesystem::path(base_dir) / p;
        const TraceRows rows = read_trace_csv(p.string());
        if (rows.input.empty())
            throw ConfigError("signal.path: a tabulated signal needs the input_v column");
        Tabulated tab{rows.time, rows.input, j.at("bandwidth_hz").get<double>(), p.string()};
        out.spec.start = get_or(j, "start", rows.time.front());
        out.spec.duration = get_or(j, "duration", rows.time.back() - rows.time.front());
        out.spec.kind = std::move(tab);
    } else {
        throw ConfigError("signal.kind: unknown kind '" + kind + "'");
    }
    if (j.contains("rho") && j.contains("peak"))
        throw ConfigError("signal: give either rho or peak, not both");
    if (j.contains("peak"))
        out.spec.target_peak = j.at("peak").get<double>();
    if (j.contains("rho"))
        out.rho = j.at("rho").get<double>();
    return out;
}

RecoveryConfig parse_recovery(const json& j, double lambda, std::optional<double> default_beta)
{
    check_keys(j, {"order", "lambda", "beta_g", "block_policy", "reconstruction"}, "recovery");
    RecoveryConfig r;
    r.order = get_or(j, "order", r.order);
    r.lambda = get_or(j, "lambda", lambda);
    r.beta_g = j.contains("beta_g") ? j.at("beta_g").get<double>() : default_beta.value_or(0.0);
    const auto policy = get_or<std::string>(j, "block_policy", "revised");
    if (policy == "revised")
        r.block_policy = BlockPolicy::Revised;
    else if (policy == "baseline")
        r.block_policy = BlockPolicy::Baseline;
    else if (policy == "jitter")
        r.block_policy = BlockPolicy::Jitter;
    else
        throw ConfigError("recovery.block_policy must be revised, baseline or jitter");
    if (j.contains("reconstruction")) {
        const auto& rj = j.at("reconstruction");
        check_keys(rj, {"method", "bandwidth_hz", "ridge"}, "recovery.reconstruction");
        const auto method = rj.at("method").get<std::string>();
        if (method == "none") {
            r.reconstruction = NoReconstruction{};
        } else if (method == "sinc") {
            r.reconstruction = SincReconstruction{};
        } else if (method == "nonuniform_ls") {
            NonUniformLsReconstruction ls;
            ls.bandwidth_hz = get_or(rj, "bandwidth_hz", 0.0);
            ls.ridge = get_or(rj, "ridge", ls.ridge);
            r.reconstruction = ls;
        } else {
            throw ConfigError("recovery.reconstruction.method must be none, sinc or nonuniform_ls");
        }
    }
    // beta_g <= 0 means "use the realized peak" in the harness; skip that check here.
    RecoveryConfig probe = r;
    if (!(probe.beta_g > 0.0))
        probe.beta_g = 1.0;
    validate(probe);
    return r;
}

SweepAxis parse_axis(const json& j, const std::string& where)
{
    if (j.contains("values")) {
        check_keys(j, {"name", "values"}, where);
        return {j.at("name").get<std::string>(), j.at("values").get<std::vector<double>>()};
    }
    check_keys(j, {"name", "start", "stop", "step"}, where);
    return make_axis(j.at("name").get<std::string>(), j.at("start").get<double>(), j.at("stop").get<double>(),
                     j.at("step").get<double>());
}

SuccessRule parse_rule(const json& j)
{
    SuccessRule rule;
    const std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
    if (!j.is_string())
        check_keys(j, {"kind", "threshold_db"}, "sweep.success_rule");
    if (kind == "exact_residual") {
        rule.kind = SuccessRule::Kind::ExactResidual;
    } else if (kind == "snr_threshold") {
        rule.kind = SuccessRule::Kind::SnrThreshold;
        if (j.is_string() || !j.contains("threshold_db"))
            throw ConfigError("sweep.success_rule: snr_threshold needs threshold_db");
        rule.threshold_db = j.at("threshold_db").get<double>();
    } else {
        throw ConfigError("sweep.success_rule must be exact_residual or snr_threshold");
    }
    return rule;
}

std::string num_or_inf(double v)
{
    if (v == std::numeric_limits<double>::infinity())
        v = kSnrCapDb;
    if (std::isnan(v))
        return "\"nan\"";
    if (std::isinf(v))
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    return json(v).dump();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir)
{
    try {
        const json doc = json::parse(text);
        check_keys(doc, {"signal", "channel", "recovery", "sweep"}, "config");
        ExperimentConfig cfg;
        cfg.channel = parse_channel(doc.value("channel", json::object()));
        if (!doc.contains("signal"))
            throw ConfigError("config: missing signal section");
        const SignalParse sig = parse_signal(doc.at("signal"), base_dir);
        cfg.signal = sig.spec;
        std::optional<double> beta;
        if (sig.rho) {
            cfg.signal.target_peak = *sig.rho * cfg.channel.lambda;
            beta = cfg.signal.target_peak;
        } else if (cfg.signal.target_peak) {
            beta = cfg.signal.target_peak;
        }
        cfg.recovery = parse_recovery(doc.value("recovery", json::object()), cfg.channel.lambda, beta);
        if (std::abs(cfg.recovery.lambda - cfg.channel.lambda) > 1e-12 * cfg.channel.lambda)
            throw ConfigError("recovery.lambda differs from channel.lambda");

        if (doc.contains("sweep")) {
            const auto& sj = doc.at("sweep");
            check_keys(sj, {"axis1", "axis2", "trials_per_cell", "success_rule", "base_seed"}, "sweep");
            SweepSpec s;
            s.axis1 = parse_axis(sj.at("axis1"), "sweep.axis1");
            if (sj.contains("axis2"))
                s.axis2 = parse_axis(sj.at("axis2"), "sweep.axis2");
            s.trials_per_cell = get_or(sj, "trials_per_cell", 1);
            if (sj.contains("success_rule"))
                s.success_rule = parse_rule(sj.at("success_rule"));
            s.base_seed = get_or<std::uint64_t>(sj, "base_seed", 0);
            s.signal = cfg.signal;
            s.channel = cfg.channel;
            s.recovery = cfg.recovery;
            validate(s);
            cfg.success_rule = s.success_rule;
            cfg.sweep = std::move(s);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(text.str(), dir.empty() ? "." : dir.string());
}

RecoveryConfig load_recovery_config(const std::string& path, double lambda)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    try {
        const json doc = json::parse(in);
        if (!doc.is_object())
            throw ConfigError(path + ": expected a JSON object");
        if (doc.contains("recovery")) {
            check_keys(doc, {"signal", "channel", "recovery", "sweep"}, "config");
            double lam = lambda;
            if (doc.contains("channel") && doc.at("channel").contains("lambda"))
                lam = doc.at("channel").at("lambda").get<double>();
            return parse_recovery(doc.at("recovery"), lam, std::nullopt);
        }
        return parse_recovery(doc, lambda, std::nullopt);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string report_json(const TrialReport& r)
{
    const auto& m = r.metrics;
    std::ostringstream os;
    os << "{\"success\":" << (r.success ? "true" : "false") << ",\"snr_r_db\":" << num_or_inf(m.snr_r)
       << ",\"psnr_db\":" << num_or_inf(m.psnr) << ",\"sinad_db\":" << (m.sinad ? num_or_inf(*m.sinad) : "null")
       << ",\"enob_bits\":" << (m.enob ? num_or_inf(*m.enob) : "null")
       << ",\"max_abs_err\":" << num_or_inf(m.max_abs_err) << ",\"rho\":" << num_or_inf(r.rho)
       << ",\"rho_eta\":" << num_or_inf(r.rho_eta) << ",\"premise_holds\":" << (r.premise_holds ? "true" : "false")
       << ",\"block_length\":" << r.recovery.block_length << ",\"valid_window\":[" << r.recovery.valid_window.begin
       << ',' << r.recovery.valid_window.end << "],\"kappa_trace\":" << json(r.recovery.kappa_trace).dump()
       << ",\"global_m\":" << (r.recovery.global_m ? std::to_string(*r.recovery.global_m) : "null")
       << ",\"reconstruction_snr_db\":"
       << (r.reconstruction_snr_db ? num_or_inf(*r.reconstruction_snr_db) : "null")
       << ",\"failure\":" << json(r.failure).dump() << "}";
    return os.str();
}

}  // namespace modsamp
