#include "modsamp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modsamp/error.hpp"
#include "modsamp/rng.hpp"

namespace modsamp {

namespace {

double mean_square(const std::vector<double>& v)
{
    if (v.empty())
        return 0.0;
    const double s = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    return s / static_cast<double>(v.size());
}

std::vector<double> draw_noise(const NoiseModel& model, double lambda, std::uint64_t seed, std::size_t n,
                               double reference_power)
{
    std::vector<double> eta(n, 0.0);
    const CounterRng rng(seed, /*stream=*/3);
    if (const auto* u = std::get_if<UniformNoise>(&model)) {
        const double a = u->rho_eta * lambda;
        for (std::size_t k = 0; k < n; ++k)
            eta[k] = rng.uniform(k, -a, a);
    } else if (const auto* gs = std::get_if<GaussianNoise>(&model)) {
        for (std::size_t k = 0; k < n; ++k)
            eta[k] = gs->sigma * rng.normal(k);
    } else if (const auto* snr = std::get_if<GaussianSnrNoise>(&model)) {
        const double sigma = std::sqrt(reference_power / std::pow(10.0, snr->snr_db / 10.0));
        for (std::size_t k = 0; k < n; ++k)
            eta[k] = sigma * rng.normal(k);
    }
    return eta;
}

double wrap_residual(double d, double lambda)
{
    return d - 2.0 * lambda * std::floor(d / (2.0 * lambda) + 0.5);
}

}  // namespace

void validate(const ChannelConfig& cfg)
{
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda))
        throw ConfigError("lambda must be positive");
    if (cfg.bits && *cfg.bits < 1)
        throw ConfigError("quantizer bits must be >= 1");
    if (cfg.bits && *cfg.bits > 52)
        throw ConfigError("quantizer bits must be <= 52");
    if (const auto* u = std::get_if<UniformNoise>(&cfg.noise); u && !(u->rho_eta >= 0.0))
        throw ConfigError("rho_eta must be >= 0");
    if (const auto* g = std::get_if<GaussianNoise>(&cfg.noise); g && !(g->sigma >= 0.0))
        throw ConfigError("sigma must be >= 0");
    if (const auto* s = std::get_if<GaussianSnrNoise>(&cfg.noise); s && !std::isfinite(s->snr_db))
        throw ConfigError("input SNR must be finite");
    if (!(cfg.oversampling > 0.0))
        throw ConfigError("oversampling factor must be positive");
    if (!(cfg.jitter >= 0.0) || !(cfg.jitter < 0.5))
        throw ConfigError("jitter level must satisfy 0 <= nu < 1/2");
}

double fold(double x, double lambda)
{
    if (!std::isfinite(x))
        throw DataError("fold: non-finite input");
    if (!(lambda > 0.0))
        throw ConfigError("fold: lambda must be positive");
    const double two_lambda = 2.0 * lambda;
    double r = x - two_lambda * std::floor((x + lambda) / two_lambda);
    // Rounding in the subtraction can land exactly on +lambda or a hair below -lambda.
    if (r >= lambda)
        r -= two_lambda;
    else if (r < -lambda)
        r += two_lambda;
    return r;
}

double quantize(double y, double lambda, int bits)
{
    if (bits < 1)
        throw ConfigError("quantize: bits must be >= 1");
    if (!(y >= -lambda && y < lambda))
        throw DataError("quantize: input outside [-lambda, lambda)");
    const double levels = std::ldexp(1.0, bits);
    const double q = 2.0 * lambda / levels;
    double i = std::floor((y + lambda) / q);
    i = std::clamp(i, 0.0, levels - 1.0);
    return -lambda + 0.5 * q + i * q;
}

ChannelOutput transmit(const SampledSignal& samples, const ChannelConfig& cfg)
{
    validate(cfg);
    const double lambda = cfg.lambda;
    const auto& gamma = samples.values;
    const std::size_t n = gamma.size();

    std::vector<double> folded(n);
    for (std::size_t k = 0; k < n; ++k)
        folded[k] = fold(gamma[k], lambda);

    const double reference_power =
        cfg.insertion == NoiseInsertion::PostFold ? mean_square(folded) : mean_square(gamma);
    const auto eta = draw_noise(cfg.noise, lambda, cfg.seed, n, reference_power);

    ChannelOutput out;
    out.measured.resize(n);
    out.noise.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double y = cfg.insertion == NoiseInsertion::PostFold ? folded[k] + eta[k] : fold(gamma[k] + eta[k], lambda);
        if (cfg.bits) {
            // A b-bit converter only sees [-lambda, lambda); values pushed out by noise wrap around.
            y = quantize(fold(y, lambda), lambda, *cfg.bits);
        }
        out.measured[k] = y;
        if (!cfg.bits)
            out.noise[k] = eta[k];
        else
            out.noise[k] = wrap_residual(y - folded[k], lambda);
    }
    return out;
}

}  // namespace modsamp
