#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "modsamp/diffcalc.hpp"
#include "modsamp/error.hpp"
#include "modsamp/rng.hpp"
#include "modsamp/signals.hpp"

using namespace modsamp;

namespace {

// Binomial-sum form of the N-th difference, independent of the recursive implementation.
std::vector<double> binomial_diff(const std::vector<double>& x, int n)
{
    std::vector<double> out;
    for (std::size_t k = 0; k + static_cast<std::size_t>(n) < x.size(); ++k) {
        double acc = 0.0;
        double c = 1.0;
        for (int j = 0; j <= n; ++j) {
            const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * c * x[k + static_cast<std::size_t>(j)];
            c = c * (n - j) / (j + 1);
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace

TEST_CASE("diff_n examples")
{
    CHECK(diff_n(Sequence({0, 1, 3, 6}), 1).values == std::vector<double>{1, 2, 3});
    CHECK(diff_n(Sequence({1, 2, 4, 7}), 2).values == std::vector<double>{1, 1});
    for (int n = 1; n <= 4; ++n)
        for (double v : diff_n(Sequence(std::vector<double>(10, 3.25)), n).values)
            CHECK(v == 0.0);
}

TEST_CASE("diff_n keeps the origin and shrinks by N")
{
    const Sequence x({1, 4, 9, 16, 25, 36}, 5);
    const auto d = diff_n(x, 3);
    CHECK(d.origin == 5);
    CHECK(d.size() == 3);
    CHECK_THROWS_AS(diff_n(x, 6), DataError);
    CHECK_THROWS_AS(diff_n(x, 0), ConfigError);
}

TEST_CASE("diff_n matches the binomial sum")
{
    const CounterRng rng(1);
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = rng.uniform(i, -5.0, 5.0);
    for (int n = 1; n <= 6; ++n) {
        const auto ours = diff_n(Sequence(x), n).values;
        const auto ref = binomial_diff(x, n);
        REQUIRE(ours.size() == ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(ours[k] == doctest::Approx(ref[k]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("antidiff examples and telescoping")
{
    CHECK(antidiff(Sequence({1, 1, 1})).values == std::vector<double>{1, 2, 3});
    CHECK(antidiff(Sequence({0, 0, 0})).values == std::vector<double>{0, 0, 0});
    CHECK(antidiff(diff_n(Sequence({2, 5, 7}), 1)).values == std::vector<double>{3, 5});
    CHECK(antidiff(Sequence({1, 2}, 4)).origin == 4);
}

TEST_CASE("round_to_lattice examples and ties")
{
    CHECK(round_to_lattice(1.9, 1.0) == 2.0);
    CHECK(round_to_lattice(-0.9, 1.0) == 0.0);
    CHECK(round_to_lattice(2.3, 0.5) == 2.0);
    CHECK(round_to_lattice(1.0, 1.0) == 2.0);
    CHECK(round_to_lattice(-1.0, 1.0) == 0.0);
    CHECK(round_to_lattice(3.0, 1.0) == 4.0);
}

TEST_CASE("round_to_lattice is idempotent and exact on the lattice")
{
    for (int i = -200; i <= 200; ++i) {
        for (double lambda : {0.36, 1.0, 2.0}) {
            const double v = 0.0173 * i * 7.0;
            const double r = round_to_lattice(v, lambda);
            CHECK(round_to_lattice(r, lambda) == r);
            CHECK(round_to_lattice(2.0 * lambda * i, lambda) == 2.0 * lambda * i);
        }
    }
    const Sequence s({0.1, 1.9, -3.2}, 2);
    const auto r = round_to_lattice(s, 1.0);
    CHECK(r.origin == 2);
    CHECK(r.values == std::vector<double>{0.0, 2.0, -4.0});
}

TEST_CASE("linearity of diff_n")
{
    const CounterRng rng(2);
    std::vector<double> x(64);
    std::vector<double> y(64);
    std::vector<double> z(64);
    for (std::size_t i = 0; i < 64; ++i) {
        x[i] = rng.uniform(2 * i, -1.0, 1.0);
        y[i] = rng.uniform(2 * i + 1, -1.0, 1.0);
        z[i] = 2.5 * x[i] - 0.75 * y[i];
    }
    for (int n = 1; n <= 4; ++n) {
        const auto dx = diff_n(Sequence(x), n).values;
        const auto dy = diff_n(Sequence(y), n).values;
        const auto dz = diff_n(Sequence(z), n).values;
        for (std::size_t k = 0; k < dz.size(); ++k)
            CHECK(dz[k] == doctest::Approx(2.5 * dx[k] - 0.75 * dy[k]).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("difference growth is at most 2^N for arbitrary sequences")
{
    const CounterRng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> eta(50);
        for (std::size_t i = 0; i < eta.size(); ++i)
            eta[i] = rng.uniform(static_cast<std::uint64_t>(trial) * 64 + i, -1.0, 1.0);
        // Alternating signs are the worst case.
        if (trial == 0)
            for (std::size_t i = 0; i < eta.size(); ++i)
                eta[i] = (i % 2 == 0) ? 1.0 : -1.0;
        for (int n = 1; n <= 5; ++n)
            CHECK(inf_norm(diff_n(Sequence(eta), n).values) <= std::ldexp(inf_norm(eta), n) * (1.0 + 1e-12));
    }
}

TEST_CASE("difference of samples bounded by (T Omega)^N times the peak")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const CounterRng rng(seed, 9);
        SignalSpec spec = random_sinc_mixture_spec(0.5, 25.0);
        spec.target_peak = rng.uniform(0, 1.0, 20.0);
        const Signal g = gen_signal(spec, seed);
        const double of = rng.uniform(1, 3.2, 30.0);
        const double t = 1.0 / (2.0 * g.bandwidth_hz() * of);
        const auto grid = make_uniform_grid(spec.start + 0.5 * t, t, static_cast<std::size_t>(spec.duration / t));
        const Sequence gamma(sample(g, grid).values);
        const double t_omega = t * g.omega();
        for (int n = 1; n <= 4; ++n) {
            const double bound = std::pow(t_omega, n) * g.peak();
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * g.peak() * std::ldexp(1.0, n);
            CHECK(inf_norm(diff_n(gamma, n).values) <= bound * (1.0 + 1e-9) + floor);
        }
    }
}

TEST_CASE("inf_norm")
{
    CHECK(inf_norm(std::vector<double>{1.0, -3.0, 2.0}) == 3.0);
    CHECK(inf_norm(std::vector<double>{}) == 0.0);
}
