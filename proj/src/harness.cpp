#include "modsamp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "modsamp/bounds.hpp"
#include "modsamp/error.hpp"
#include "modsamp/rng.hpp"

namespace modsamp {

namespace {

constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kGridStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool exact_residual(const RecoveryResult& rec, std::span<const double> truth, std::span<const double> noise,
                    double lambda)
{
    const auto& w = rec.valid_window;
    if (w.size() == 0)
        return false;
    const double two_lambda = 2.0 * lambda;
    const double first = rec.unfolded.at_index(w.begin) - truth[static_cast<std::size_t>(w.begin)] -
                         noise[static_cast<std::size_t>(w.begin)];
    const double offset = two_lambda * std::floor(first / two_lambda + 0.5);
    for (long k = w.begin; k < w.end; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double d = rec.unfolded.at_index(k) - truth[i] - noise[i] - offset;
        if (!(std::abs(d) <= 1e-9 * lambda))
            return false;
    }
    return true;
}

double rho_eta_of(const ChannelConfig& c)
{
    double r = 0.0;
    if (const auto* u = std::get_if<UniformNoise>(&c.noise))
        r += u->rho_eta;
    if (c.bits)
        r += std::ldexp(1.0, -*c.bits);
    return r;
}

template <class F>
double bound_or_inf(F&& f)
{
    try {
        return f();
    } catch (const InfeasibleError&) {
        return kInf;
    }
}

void apply_axis(const std::string& name, double v, SignalSpec& s, ChannelConfig& c, RecoveryConfig& r)
{
    if (name == "rho") {
        s.target_peak = v * c.lambda;
        r.beta_g = v * c.lambda;
    } else if (name == "of") {
        c.oversampling = v;
    } else if (name == "rho_eta") {
        c.noise = UniformNoise{v};
    } else if (name == "nu") {
        c.jitter = v;
    } else if (name == "bits") {
        c.bits = static_cast<int>(std::lround(v));
    } else if (name == "snr_db") {
        c.noise = GaussianSnrNoise{v};
    } else if (name == "order") {
        r.order = static_cast<int>(std::lround(v));
    } else {
        throw ConfigError("unknown sweep axis '" + name + "'");
    }
}

std::string format_value(double v, const char* fmt)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

struct Cell {
    std::vector<double> axis_values;
    SignalSpec signal;
    ChannelConfig channel;
    RecoveryConfig recovery;
};

std::vector<Cell> expand_cells(const SweepSpec& spec)
{
    std::vector<Cell> cells;
    const std::vector<double> second = spec.axis2 ? spec.axis2->values : std::vector<double>{0.0};
    for (double v1 : spec.axis1.values) {
        for (double v2 : second) {
            Cell c{{v1}, spec.signal, spec.channel, spec.recovery};
            apply_axis(spec.axis1.name, v1, c.signal, c.channel, c.recovery);
            if (spec.axis2) {
                apply_axis(spec.axis2->name, v2, c.signal, c.channel, c.recovery);
                c.axis_values.push_back(v2);
            }
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

}  // namespace

double sampling_period(const Signal& g, const ChannelConfig& channel)
{
    return 1.0 / (2.0 * g.bandwidth_hz() * channel.oversampling);
}

TrialReport run_trial(const SignalSpec& signal, const ChannelConfig& channel, const RecoveryConfig& recovery,
                      std::uint64_t seed, SuccessRule rule)
{
    if (std::abs(recovery.lambda - channel.lambda) > 1e-12 * channel.lambda)
        throw ConfigError("recovery and channel disagree on lambda");
    validate(channel);

    TrialReport r;
    try {
        const Signal g = gen_signal(signal, derive_seed(seed, kSignalStream));
        const double period = sampling_period(g, channel);
        const auto count = static_cast<std::size_t>(std::floor(signal.duration / period));
        const double t0 = signal.start + 0.5 * period;
        r.grid = channel.jitter > 0.0
                     ? make_jitter_grid(period, count, channel.jitter, derive_seed(seed, kGridStream), t0)
                     : make_uniform_grid(t0, period, count);

        SampledSignal sampled = sample(g, r.grid);
        sampled.lambda = channel.lambda;
        ChannelConfig ch = channel;
        ch.seed = derive_seed(seed, kNoiseStream);
        ChannelOutput out = transmit(sampled, ch);
        r.truth = std::move(sampled.values);
        r.measured = std::move(out.measured);
        r.noise = std::move(out.noise);

        const double lambda = channel.lambda;
        RecoveryConfig rc = recovery;
        if (!(rc.beta_g > 0.0))
            rc.beta_g = g.peak();
        r.rho = g.peak() / lambda;
        r.rho_eta = inf_norm(r.noise) / lambda;
        const double t_omega = period * g.omega();
        if (r.grid.is_uniform())
            r.premise_holds = std::pow(t_omega, rc.order) * r.rho + std::ldexp(r.rho_eta, rc.order) < 1.0;
        else
            r.premise_holds = rc.order == 2 && jitter_condition_holds(r.rho, r.rho_eta, channel.jitter, t_omega);

        const Sequence y(r.measured);
        r.recovery = r.grid.is_uniform() ? recover_fixed_order(y, rc) : recover_jitter_n2(y, r.grid, rc);

        const Sequence truth(r.truth);
        const Alignment al = align_2lambda(r.recovery.unfolded, truth, lambda);
        r.recovery.global_m = al.m;

        const auto& w = r.recovery.valid_window;
        std::vector<double> est;
        std::vector<double> ref;
        for (long k = w.begin; k < w.end; ++k) {
            est.push_back(al.aligned.at_index(k));
            ref.push_back(r.truth[static_cast<std::size_t>(k)]);
        }
        if (est.empty())
            throw DataError("empty valid window");

        auto& m = r.metrics;
        m.snr_r = snr_r(ref, est);
        m.psnr = psnr(ref, est, g.peak());
        double worst = 0.0;
        for (std::size_t i = 0; i < est.size(); ++i)
            worst = std::max(worst, std::abs(est[i] - ref[i]));
        m.max_abs_err = worst;
        if (const auto* tone = std::get_if<Tone>(&signal.kind)) {
            try {
                m.sinad = sinad_single_tone(est, tone->freq_hz, 1.0 / period);
                m.enob = enob(cap_db(*m.sinad));
            } catch (const DataError&) {
                // window too short for a tone fit: leave SINAD unset
            }
        }

        if (!std::holds_alternative<NoReconstruction>(recovery.reconstruction)) {
            std::vector<double> instants;
            for (long k = w.begin; k < w.end; ++k)
                instants.push_back(r.grid.instant(static_cast<std::size_t>(k)));
            const auto query = interior_queries(instants, period);
            std::vector<double> fit;
            try {
                if (const auto* ls = std::get_if<NonUniformLsReconstruction>(&recovery.reconstruction)) {
                    const double band = ls->bandwidth_hz > 0.0 ? ls->bandwidth_hz : g.bandwidth_hz();
                    fit = nonuniform_ls_reconstruct(instants, est, band, ls->ridge, period, query);
                } else {
                    fit = sinc_interpolate(Sequence(est, w.begin), r.grid, query);
                }
                std::vector<double> oracle;
                oracle.reserve(query.size());
                for (double t : query)
                    oracle.push_back(g(t));
                r.reconstruction_snr_db = snr_r(oracle, fit);
            } catch (const Error&) {
                // reported as an unset reconstruction SNR
            }
        }

        bool ok = false;
        if (rule.kind == SuccessRule::Kind::ExactResidual)
            ok = exact_residual(r.recovery, r.truth, r.noise, lambda);
        else
            ok = m.snr_r >= rule.threshold_db;
        m.success = ok && m.max_abs_err < 0.5 * lambda;
        r.success = m.success;
        if (!r.success)
            r.failure = ok ? "reconstruction error exceeds lambda/2" : "unwrap does not match ground truth";
    } catch (const ConfigError& e) {
        r.success = false;
        r.failure = e.what();
        r.metrics.snr_r = kNan;
        r.metrics.psnr = kNan;
    } catch (const DataError& e) {
        r.success = false;
        r.failure = e.what();
        r.metrics.snr_r = kNan;
        r.metrics.psnr = kNan;
    }
    return r;
}

std::vector<double> interior_queries(std::span<const double> instants, double period, double trim)
{
    if (instants.size() < 2 || !(period > 0.0) || !(trim >= 0.0 && trim < 0.5))
        throw ConfigError("interior query grid needs two instants, period > 0 and trim in [0, 0.5)");
    const double a = instants.front();
    const double b = instants.back();
    const double margin = trim * (b - a);
    const double step = 0.25 * period;
    std::vector<double> q;
    const auto n = static_cast<long>(std::floor((b - a - 2.0 * margin) / step));
    for (long i = 0; i <= n; ++i)
        q.push_back(a + margin + static_cast<double>(i) * step);
    return q;
}

SweepAxis make_axis(std::string name, double start, double stop, double step)
{
    if (!(step > 0.0) || !(stop >= start))
        throw ConfigError("axis '" + name + "' needs step > 0 and stop >= start");
    SweepAxis axis{std::move(name), {}};
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        axis.values.push_back(start + static_cast<double>(i) * step);
    return axis;
}

void validate(const SweepSpec& spec)
{
    if (spec.axis1.values.empty() || (spec.axis2 && spec.axis2->values.empty()))
        throw ConfigError("sweep axes must be non-empty");
    if (spec.trials_per_cell < 1)
        throw ConfigError("trials_per_cell must be >= 1");
    if (std::abs(spec.recovery.lambda - spec.channel.lambda) > 1e-12 * spec.channel.lambda)
        throw ConfigError("recovery and channel disagree on lambda");
    // Fails fast on unknown axis names.
    SignalSpec s = spec.signal;
    ChannelConfig c = spec.channel;
    RecoveryConfig r = spec.recovery;
    apply_axis(spec.axis1.name, spec.axis1.values.front(), s, c, r);
    if (spec.axis2)
        apply_axis(spec.axis2->name, spec.axis2->values.front(), s, c, r);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell, std::size_t trial) noexcept
{
    return derive_seed(base_seed, cell, trial);
}

SweepResult run_sweep(const SweepSpec& spec, unsigned parallelism)
{
    validate(spec);
    const auto cells = expand_cells(spec);
    const auto trials = static_cast<std::size_t>(spec.trials_per_cell);
    const std::size_t jobs = cells.size() * trials;

    struct Outcome {
        bool success = false;
        double snr = kNan;
    };
    std::vector<Outcome> outcomes(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
            const std::size_t c = j / trials;
            const std::size_t t = j % trials;
            const auto& cell = cells[c];
            const TrialReport rep = run_trial(cell.signal, cell.channel, cell.recovery,
                                              trial_seed(spec.base_seed, c, t), spec.success_rule);
            outcomes[j] = {rep.success, rep.metrics.snr_r};
        }
    };
    const unsigned threads = std::max(1u, parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back(worker);
    }

    SweepResult result;
    result.axis_names.push_back(spec.axis1.name);
    if (spec.axis2)
        result.axis_names.push_back(spec.axis2->name);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        CellResult cr;
        cr.axis_values = cell.axis_values;
        cr.trials = static_cast<int>(trials);
        double snr_sum = 0.0;
        int snr_count = 0;
        int successes = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& o = outcomes[c * trials + t];
            successes += o.success ? 1 : 0;
            if (!std::isnan(o.snr)) {
                snr_sum += cap_db(o.snr);
                ++snr_count;
            }
        }
        cr.failures = cr.trials - successes;
        cr.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
        cr.mean_snr_r_db = snr_count > 0 ? snr_sum / snr_count : kNan;

        const double rho = cell.signal.target_peak ? *cell.signal.target_peak / cell.channel.lambda : kNan;
        const double rho_eta = rho_eta_of(cell.channel);
        const double nu = cell.channel.jitter;
        if (std::isnan(rho)) {
            cr.theory_of_rsod = cr.theory_of_rsod_sinc = cr.theory_of_jitter = kNan;
        } else {
            cr.theory_of_rsod = bound_or_inf([&] { return of_required(OfVariant::RSoD, {rho, rho_eta}); });
            cr.theory_of_rsod_sinc = bound_or_inf([&] { return of_required(OfVariant::RSoDSinc, {rho, rho_eta}); });
            cr.theory_of_jitter = bound_or_inf([&] { return of_jitter(rho, rho_eta, nu, JitterMode::Generic); });
        }
        result.cells.push_back(std::move(cr));
    }
    return result;
}

std::string to_csv(const SweepResult& result)
{
    std::ostringstream os;
    for (const auto& n : result.axis_names)
        os << n << ',';
    os << "mean_snr_r_db,success_rate,theory_of_eq19,theory_of_eq20,theory_of_eq24,trials,failures\n";
    for (const auto& c : result.cells) {
        for (double v : c.axis_values)
            os << format_value(v, "%.10g") << ',';
        os << format_value(c.mean_snr_r_db, "%.6f") << ',' << format_value(c.success_rate, "%.6f") << ','
           << format_value(c.theory_of_rsod, "%.6f") << ',' << format_value(c.theory_of_rsod_sinc, "%.6f") << ','
           << format_value(c.theory_of_jitter, "%.6f") << ',' << c.trials << ',' << c.failures << '\n';
    }
    return os.str();
}

std::string to_json(const SweepResult& result)
{
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v))
            return v;
        return format_value(v, "%g");
    };
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) {
        nlohmann::json axes = nlohmann::json::object();
        for (std::size_t i = 0; i < result.axis_names.size(); ++i)
            axes[result.axis_names[i]] = c.axis_values[i];
        cells.push_back({{"axes", axes},
                         {"mean_snr_r_db", num(c.mean_snr_r_db)},
                         {"success_rate", c.success_rate},
                         {"theory_of_eq19", num(c.theory_of_rsod)},
                         {"theory_of_eq20", num(c.theory_of_rsod_sinc)},
                         {"theory_of_eq24", num(c.theory_of_jitter)},
                         {"trials", c.trials},
                         {"failures", c.failures}});
    }
    int trials = 0;
    int failures = 0;
    for (const auto& c : result.cells) {
        trials += c.trials;
        failures += c.failures;
    }
    nlohmann::json doc = {{"axes", result.axis_names},
                          {"cells", cells},
                          {"total_trials", trials},
                          {"total_failures", failures},
                          {"snr_cap_db", kSnrCapDb}};
    return doc.dump(2);
}

std::optional<double> success_frontier(const SweepResult& result, std::size_t axis, double rate,
                                       std::optional<double> other)
{
    std::map<double, double> rates;
    for (const auto& c : result.cells) {
        if (axis >= c.axis_values.size())
            throw ConfigError("frontier axis out of range");
        if (other && c.axis_values.size() > 1) {
            const double o = c.axis_values[1 - axis];
            if (std::abs(o - *other) > 1e-9 * std::max(1.0, std::abs(*other)))
                continue;
        }
        rates[c.axis_values[axis]] = c.success_rate;
    }
    for (const auto& [v, r] : rates)
        if (r >= rate)
            return v;
    return std::nullopt;
}

}  // namespace modsamp
