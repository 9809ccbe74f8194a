#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "modsamp/channel.hpp"
#include "modsamp/error.hpp"

using namespace modsamp;

namespace {

SampledSignal ramp(std::size_t n, double slope)
{
    SampledSignal s;
    s.grid = make_uniform_grid(0.0, 1.0, n);
    for (std::size_t k = 0; k < n; ++k)
        s.values.push_back(slope * static_cast<double>(k) - 0.5 * slope * static_cast<double>(n));
    return s;
}

}  // namespace

TEST_CASE("fold examples")
{
    CHECK(fold(0.5, 1.0) == 0.5);
    CHECK(fold(1.0, 1.0) == -1.0);
    CHECK(fold(1.3, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fold(-1.0, 1.0) == -1.0);
    CHECK(fold(3.0, 1.0) == -1.0);
}

TEST_CASE("fold range, idempotence and periodicity")
{
    for (int i = -4000; i <= 4000; ++i) {
        const double x = 0.01237 * i;
        for (double lambda : {0.36, 1.0, 2.5}) {
            const double f = fold(x, lambda);
            CHECK(f >= -lambda);
            CHECK(f < lambda);
            CHECK(fold(f, lambda) == f);
            for (int k : {-3, 1, 7}) {
                const double shifted = fold(x + 2.0 * k * lambda, lambda);
                // Equal up to rounding in x + 2 k lambda, or wrapped across the -lambda boundary.
                const double d = std::abs(shifted - f);
                CHECK((d < 64 * std::numeric_limits<double>::epsilon() * (std::abs(x) + 2.0 * std::abs(k) * lambda) ||
                       std::abs(d - 2.0 * lambda) < 1e-12));
            }
        }
    }
}

TEST_CASE("fold rejects non-finite input")
{
    CHECK_THROWS_AS(fold(std::numeric_limits<double>::infinity(), 1.0), DataError);
    CHECK_THROWS_AS(fold(std::nan(""), 1.0), DataError);
}

TEST_CASE("quantize examples")
{
    CHECK(quantize(0.3, 1.0, 3) == 0.375);
    CHECK(quantize(0.125, 1.0, 3) == 0.125);
    CHECK(quantize(-1.0, 1.0, 3) == -0.875);
    CHECK_THROWS_AS(quantize(1.0, 1.0, 3), DataError);
    CHECK_THROWS_AS(quantize(0.0, 1.0, 0), ConfigError);
}

TEST_CASE("quantization error never exceeds lambda 2^-b and outputs are levels")
{
    for (int b = 1; b <= 8; ++b) {
        for (double lambda : {0.36, 1.0}) {
            const double q = 2.0 * lambda / std::ldexp(1.0, b);
            for (int i = 0; i < 20000; ++i) {
                const double y = -lambda + 2.0 * lambda * i / 20000.0;
                const double v = quantize(y, lambda, b);
                CHECK(std::abs(v - y) <= lambda * std::ldexp(1.0, -b) * (1.0 + 1e-12));
                const double idx = (v + lambda - 0.5 * q) / q;
                CHECK(std::abs(idx - std::round(idx)) < 1e-9);
            }
        }
    }
}

TEST_CASE("small signal passes through unchanged")
{
    const auto s = ramp(100, 0.01);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    const auto out = transmit(s, cfg);
    CHECK(out.measured == s.values);
    for (double e : out.noise)
        CHECK(e == 0.0);
}

TEST_CASE("uniform noise stays within its bound and the contract y = M(gamma) + eta holds")
{
    const auto s = ramp(5000, 0.013);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.noise = UniformNoise{0.15};
    cfg.seed = 17;
    const auto out = transmit(s, cfg);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        CHECK(std::abs(out.noise[k]) <= 0.15);
        CHECK(out.measured[k] == doctest::Approx(fold(s.values[k], 1.0) + out.noise[k]));
    }
}

TEST_CASE("post-fold Gaussian noise has the requested variance")
{
    const auto s = ramp(100000, 0.001);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.noise = GaussianNoise{0.05};
    cfg.seed = 3;
    const auto out = transmit(s, cfg);
    double mean = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k)
        mean += out.measured[k] - fold(s.values[k], 1.0);
    mean /= static_cast<double>(s.values.size());
    double var = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double d = out.measured[k] - fold(s.values[k], 1.0) - mean;
        var += d * d;
    }
    var /= static_cast<double>(s.values.size() - 1);
    CHECK(var == doctest::Approx(0.05 * 0.05).epsilon(0.05));
}

TEST_CASE("SNR-referenced Gaussian noise scales with measured folded power")
{
    const auto s = ramp(100000, 0.001);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.noise = GaussianSnrNoise{10.0};
    cfg.seed = 4;
    const auto out = transmit(s, cfg);
    double p = 0.0;
    double n = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double f = fold(s.values[k], 1.0);
        p += f * f;
        n += out.noise[k] * out.noise[k];
    }
    CHECK(10.0 * std::log10(p / n) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("pre-fold insertion folds the noisy signal")
{
    const auto s = ramp(2000, 0.02);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.noise = UniformNoise{0.1};
    cfg.insertion = NoiseInsertion::PreFold;
    cfg.seed = 5;
    const auto out = transmit(s, cfg);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        CHECK(out.measured[k] == doctest::Approx(fold(s.values[k] + out.noise[k], 1.0)));
        CHECK(out.measured[k] >= -1.0);
        CHECK(out.measured[k] < 1.0);
    }
}

TEST_CASE("quantized channel: returned noise is y - M(gamma) modulo 2 lambda and bounded by the step")
{
    const auto s = ramp(3000, 0.017);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.bits = 3;
    const auto out = transmit(s, cfg);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        CHECK(std::abs(out.noise[k]) <= 0.125 + 1e-12);
        const double d = out.measured[k] - fold(s.values[k], 1.0) - out.noise[k];
        CHECK(std::abs(d - 2.0 * std::round(d / 2.0)) < 1e-12);
    }
}

TEST_CASE("transmit is deterministic in the seed")
{
    const auto s = ramp(500, 0.05);
    ChannelConfig cfg;
    cfg.lambda = 1.0;
    cfg.noise = GaussianNoise{0.1};
    cfg.seed = 99;
    CHECK(transmit(s, cfg).measured == transmit(s, cfg).measured);
    ChannelConfig other = cfg;
    other.seed = 100;
    CHECK(transmit(s, cfg).measured != transmit(s, other).measured);
}

TEST_CASE("invalid channel configurations")
{
    ChannelConfig cfg;
    cfg.lambda = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.lambda = 1.0;
    cfg.bits = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.bits.reset();
    cfg.noise = UniformNoise{-0.1};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.noise = GaussianNoise{-1.0};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}
