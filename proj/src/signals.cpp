#include "modsamp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modsamp/error.hpp"
#include "modsamp/rng.hpp"

namespace modsamp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGoldenRatioInv = 0.6180339887498949;
// Instants may sit on the window boundary up to rounding of t0 + k T.
constexpr double kWindowSlack = 1e-9;

double mixture_value(const SincMixture& m, std::span<const double> coeffs, double t)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += coeffs[i] * sinc(2.0 * m.bandwidth_hz * (t - m.shifts[i]));
    return acc;
}

double table_value(const Tabulated& tab, double period, double t)
{
    double acc = 0.0;
    const double t0 = tab.times.front();
    for (std::size_t i = 0; i < tab.values.size(); ++i)
        acc += tab.values[i] * sinc((t - t0) / period - static_cast<double>(i));
    return acc;
}

double golden_max(const std::function<double(double)>& f, double a, double b)
{
    double c = b - kGoldenRatioInv * (b - a);
    double d = a + kGoldenRatioInv * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatioInv * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatioInv * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

void validate(const SignalSpec& spec)
{
    if (!(spec.duration > 0.0) || !std::isfinite(spec.duration))
        throw ConfigError("signal duration must be positive");
    if (!std::isfinite(spec.start))
        throw ConfigError("signal start must be finite");
    if (spec.target_peak && !(*spec.target_peak > 0.0))
        throw ConfigError("target peak must be positive");

    if (const auto* m = std::get_if<SincMixture>(&spec.kind)) {
        if (!(m->bandwidth_hz > 0.0))
            throw ConfigError("sinc mixture bandwidth must be positive");
        if (m->shifts.empty())
            throw ConfigError("sinc mixture needs at least one term");
        if (!m->random_coeffs && m->coeffs.size() != m->shifts.size())
            throw ConfigError("sinc mixture coeffs and shifts differ in length");
    } else if (const auto* tone = std::get_if<Tone>(&spec.kind)) {
        if (!(tone->freq_hz > 0.0))
            throw ConfigError("tone frequency must be positive");
        if (tone->amplitude == 0.0)
            throw ConfigError("tone amplitude must be non-zero");
    } else {
        const auto& tab = std::get<Tabulated>(spec.kind);
        if (tab.times.size() < 2 || tab.times.size() != tab.values.size())
            throw ConfigError("tabulated signal needs matching times/values with >= 2 rows");
        if (tab.bandwidth_hz < 0.0)
            throw ConfigError("tabulated bandwidth must be non-negative");
    }
}

}  // namespace

double sinc(double x) noexcept
{
    if (x == 0.0)
        return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

SignalSpec random_sinc_mixture_spec(double bandwidth_hz, double duration, std::size_t terms)
{
    SincMixture m;
    m.bandwidth_hz = bandwidth_hz;
    m.random_coeffs = true;
    const double unit = 1.0 / (2.0 * bandwidth_hz);
    for (std::size_t i = 1; i <= terms; ++i)
        m.shifts.push_back(static_cast<double>(i) * unit);
    const double centre = 0.5 * static_cast<double>(terms + 1) * unit;

    SignalSpec spec;
    spec.kind = std::move(m);
    spec.duration = duration;
    spec.start = centre - 0.5 * duration;
    return spec;
}

double Signal::omega() const noexcept
{
    return 2.0 * kPi * bandwidth_hz_;
}

double Signal::operator()(double t) const
{
    if (const auto* m = std::get_if<SincMixture>(&kind_))
        return mixture_value(*m, coeffs_, t);
    if (const auto* tone = std::get_if<Tone>(&kind_))
        return scale_ * tone->amplitude * std::cos(2.0 * kPi * tone->freq_hz * t + tone->phase);
    return scale_ * table_value(std::get<Tabulated>(kind_), table_period_, t);
}

double find_peak(const std::function<double(double)>& g, double t0, double t1, double bandwidth_hz)
{
    if (!(t1 > t0) || !(bandwidth_hz > 0.0))
        throw ConfigError("find_peak needs a non-empty window and positive bandwidth");
    const double step = 1.0 / (256.0 * 2.0 * bandwidth_hz);
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step)) + 1;
    const double h = (t1 - t0) / static_cast<double>(n - 1);

    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::abs(g(t0 + h * static_cast<double>(i)));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double centre = t0 + h * static_cast<double>(best_i);
    const double a = std::max(t0, centre - h);
    const double b = std::min(t1, centre + h);
    const double refined = golden_max([&](double t) { return std::abs(g(t)); }, a, b);
    return std::max(best, refined);
}

Signal gen_signal(const SignalSpec& spec, std::uint64_t seed)
{
    validate(spec);

    Signal out;
    out.kind_ = spec.kind;
    out.start_ = spec.start;
    out.end_ = spec.start + spec.duration;

    double native_peak = 0.0;
    if (auto* m = std::get_if<SincMixture>(&out.kind_)) {
        out.bandwidth_hz_ = m->bandwidth_hz;
        if (m->random_coeffs) {
            const CounterRng rng(seed, /*stream=*/1);
            m->coeffs.resize(m->shifts.size());
            for (std::size_t i = 0; i < m->shifts.size(); ++i)
                m->coeffs[i] = rng.uniform(i, -1.0, 1.0);
        }
        out.coeffs_ = m->coeffs;
        const auto& mix = *m;
        const auto& coeffs = out.coeffs_;
        native_peak = find_peak([&](double t) { return mixture_value(mix, coeffs, t); }, out.start_, out.end_,
                                out.bandwidth_hz_);
    } else if (const auto* tone = std::get_if<Tone>(&out.kind_)) {
        out.bandwidth_hz_ = tone->freq_hz;
        native_peak = std::abs(tone->amplitude);
    } else {
        const auto& tab = std::get<Tabulated>(out.kind_);
        out.table_period_ = (tab.times.back() - tab.times.front()) / static_cast<double>(tab.times.size() - 1);
        if (!(out.table_period_ > 0.0))
            throw ConfigError("tabulated times must increase");
        out.bandwidth_hz_ = tab.bandwidth_hz > 0.0 ? tab.bandwidth_hz : 0.5 / out.table_period_;
        const double period = out.table_period_;
        native_peak = find_peak([&](double t) { return table_value(tab, period, t); }, out.start_, out.end_,
                                0.5 / period);
    }

    if (spec.target_peak && !(native_peak > 0.0))
        throw ConfigError("cannot rescale a signal that is identically zero on its window");

    if (spec.target_peak) {
        const double s = *spec.target_peak / native_peak;
        if (std::holds_alternative<SincMixture>(out.kind_)) {
            for (double& c : out.coeffs_)
                c *= s;
        } else {
            out.scale_ = s;
        }
        out.peak_ = *spec.target_peak;
    } else {
        out.peak_ = native_peak;
    }
    return out;
}

double SamplingGrid::instant(std::size_t k) const noexcept
{
    const double nominal = t0 + static_cast<double>(k) * period;
    return offsets.empty() ? nominal : nominal + offsets[k];
}

std::vector<double> SamplingGrid::instants() const
{
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k)
        t[k] = instant(k);
    return t;
}

SamplingGrid make_uniform_grid(double t0, double period, std::size_t count)
{
    if (!(period > 0.0))
        throw ConfigError("sampling period must be positive");
    SamplingGrid g;
    g.t0 = t0;
    g.period = period;
    g.count = count;
    return g;
}

SamplingGrid make_jitter_grid(double period, std::size_t count, double nu, std::uint64_t seed, double t0)
{
    if (!(nu >= 0.0) || !(nu < 0.5))
        throw ConfigError("jitter level must satisfy 0 <= nu < 1/2");
    SamplingGrid g = make_uniform_grid(t0, period, count);
    g.jitter = nu;
    if (nu == 0.0)
        return g;
    const CounterRng rng(seed, /*stream=*/2);
    const double bound = nu * period;
    g.offsets.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        g.offsets[k] = rng.uniform(k, -bound, bound);
    return g;
}

SampledSignal sample(const Signal& g, const SamplingGrid& grid)
{
    SampledSignal out;
    out.grid = grid;
    out.bandwidth_hz = g.bandwidth_hz();
    out.values.resize(grid.count);
    const double slack = kWindowSlack * std::max(1.0, std::abs(g.end() - g.start()));
    for (std::size_t k = 0; k < grid.count; ++k) {
        const double t = grid.instant(k);
        if (t < g.start() - slack || t > g.end() + slack)
            throw DataError("sampling instant " + std::to_string(k) + " lies outside the signal window");
        out.values[k] = g(t);
    }
    return out;
}

double bernstein_bound(double omega, double peak, int order, BernsteinVariant variant)
{
    if (order < 1)
        throw ConfigError("derivative order must be >= 1");
    const double generic = std::pow(omega, order) * peak;
    return variant == BernsteinVariant::Generic ? generic : generic / static_cast<double>(order + 1);
}

double bernstein_bound(const Signal& g, int order, BernsteinVariant variant)
{
    return bernstein_bound(g.omega(), g.peak(), order, variant);
}

}  // namespace modsamp
