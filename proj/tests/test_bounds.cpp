#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modsamp/bounds.hpp"
#include "modsamp/error.hpp"
#include "modsamp/rng.hpp"

using namespace modsamp;

TEST_CASE("nmin examples")
{
    CHECK(nmin(12.0, 18.0, NminMode::Revised) == 2);
    CHECK(nmin(12.0, 18.0, NminMode::Baseline) == 4);
    CHECK(nmin(1.0, 5.0, NminMode::Revised) == 1);
    CHECK(nmin(0.5, 20.0, NminMode::Baseline) == 1);
    CHECK_THROWS_AS(nmin(12.0, 3.0, NminMode::Revised), InfeasibleError);
    CHECK_THROWS_AS(nmin(12.0, 8.0, NminMode::Baseline), InfeasibleError);
}

TEST_CASE("noisy fixed-order bound, rho = 10")
{
    const double rho_eta[] = {0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
    const double n2[] = {12.83, 13.78, 14.98, 16.56, 18.77, 22.21};
    for (int i = 0; i < 6; ++i)
        CHECK(std::abs(of_required(OfVariant::NoisyFixedN, {10.0, rho_eta[i], 2}) - n2[i]) <= 0.01);

    CHECK(std::abs(of_required(OfVariant::NoisyFixedN, {10.0, 0.10, 3}) - 11.57) <= 0.01);
    CHECK(std::abs(of_required(OfVariant::NoisyFixedN, {10.0, 0.12, 3}) - 19.79) <= 0.01);
    for (double e : {0.14, 0.16, 0.18, 0.20})
        CHECK_THROWS_AS(of_required(OfVariant::NoisyFixedN, {10.0, e, 3}), InfeasibleError);
}

TEST_CASE("baseline staircase bound, rho = 10")
{
    const double rho_eta[] = {0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
    const double with_e[] = {136.64, 273.27, 546.54, 1093.09, 8744.69, 139915.01};
    const double without_e[] = {50.27, 100.53, 201.06, 402.12, 3216.99, 51471.85};
    for (int i = 0; i < 6; ++i) {
        const auto a = of_baseline_noisy(10.0, rho_eta[i], true);
        const auto b = of_baseline_noisy(10.0, rho_eta[i], false);
        CHECK(a.alpha == b.alpha);
        CHECK(std::abs(a.of - with_e[i]) <= (i == 5 ? 0.1 : 0.01));
        CHECK(std::abs(b.of - without_e[i]) <= (i == 5 ? 0.1 : 0.01));
    }
    CHECK(of_baseline_noisy(10.0, 0.10, true).alpha == 4);
    CHECK_THROWS_AS(of_baseline_noisy(10.0, 0.25, true), InfeasibleError);
    CHECK_THROWS_AS(of_baseline_noisy(10.0, 0.20, true, 8), InfeasibleError);
}

TEST_CASE("second-order bounds with rho_eta = 0")
{
    struct Row {
        double rho, generic, sinc;
    };
    const Row rows[] = {{20.50, 14.22, 8.21}, {7.15, 8.40, 4.85}, {7.20, 8.43, 4.87}, {17.28, 13.06, 7.54}, {5.92, 7.64, 4.41}};
    for (const auto& r : rows) {
        CHECK(std::abs(of_required(OfVariant::RSoD, {r.rho, 0.0}) - r.generic) <= 0.01);
        CHECK(std::abs(of_required(OfVariant::RSoDSinc, {r.rho, 0.0}) - r.sinc) <= 0.01);
    }
    CHECK_THROWS_AS(of_required(OfVariant::RSoD, {10.0, 0.25}), InfeasibleError);
    CHECK(of_required(OfVariant::RSoD, {10.0, 0.1}) ==
          doctest::Approx(of_required(OfVariant::NoisyFixedN, {10.0, 0.1, 2})));
}

TEST_CASE("quantized bound")
{
    CHECK(of_required(OfVariant::Quantized, {10.0, 0.0, 2, 3}) ==
          doctest::Approx(std::numbers::pi * std::sqrt(10.0 / 0.5)));
    CHECK_THROWS_AS(of_required(OfVariant::Quantized, {10.0, 0.0, 3, 3}), InfeasibleError);
    // b -> infinity approaches pi rho^(1/N).
    for (int n = 1; n <= 4; ++n)
        CHECK(of_required(OfVariant::Quantized, {10.0, 0.0, n, 60}) ==
              doctest::Approx(std::numbers::pi * std::pow(10.0, 1.0 / n)).epsilon(1e-12));
}

TEST_CASE("monotonicity of the fixed-order bound")
{
    for (int n = 1; n <= 4; ++n) {
        double prev = 0.0;
        for (double rho = 1.0; rho < 50.0; rho += 0.5) {
            const double v = of_required(OfVariant::NoisyFixedN, {rho, 0.01, n});
            CHECK(v > prev);
            prev = v;
        }
        prev = 0.0;
        for (double e = 0.0; e < std::ldexp(1.0, -n) - 0.01; e += 0.005) {
            const double v = of_required(OfVariant::NoisyFixedN, {10.0, e, n});
            CHECK(v > prev);
            prev = v;
        }
    }
    double prev = 1e300;
    for (int n = 1; n <= 200; ++n) {
        const double v = of_required(OfVariant::NoisyFixedN, {10.0, 0.0, n});
        CHECK(v < prev);
        CHECK(v > std::numbers::pi);
        prev = v;
    }
    CHECK(prev == doctest::Approx(std::numbers::pi).epsilon(0.02));
}

TEST_CASE("nmin is the smallest order whose noiseless bound is met")
{
    const CounterRng rng(5);
    for (std::uint64_t i = 0; i < 500; ++i) {
        const double rho = rng.uniform(3 * i, 1.01, 200.0);
        const double of = rng.uniform(3 * i + 1, 3.3, 60.0);
        const int n = nmin(rho, of, NminMode::Revised);
        CHECK(of_required(OfVariant::NoisyFixedN, {rho, 0.0, n}) <= of * (1.0 + 1e-12));
        if (n > 1)
            CHECK(of_required(OfVariant::NoisyFixedN, {rho, 0.0, n - 1}) > of * (1.0 - 1e-12));
    }
}

TEST_CASE("jitter bounds")
{
    for (double rho : {2.0, 5.92, 10.0, 20.5})
        for (double e : {0.0, 0.1, 0.2}) {
            CHECK(of_jitter(rho, e, 0.0, JitterMode::Generic) == doctest::Approx(of_required(OfVariant::RSoD, {rho, e})));
            CHECK(of_jitter(rho, e, 0.0, JitterMode::Sinc) == doctest::Approx(of_required(OfVariant::RSoDSinc, {rho, e})));
        }
    // Values from root-finding on the defining inequalities.
    CHECK(of_jitter(5.92, 0.0, 0.09, JitterMode::Sinc) == doctest::Approx(6.393772937308947).epsilon(1e-10));
    CHECK(of_jitter(10.0, 0.15, 0.05, JitterMode::Generic) == doctest::Approx(25.416018461576297).epsilon(1e-10));
    CHECK(of_jitter(5.92, 0.0, 0.09, JitterMode::Generic) == doctest::Approx(11.692441584413853).epsilon(1e-10));
    CHECK_THROWS_AS(of_jitter(10.0, 0.25, 0.05, JitterMode::Generic), InfeasibleError);

    for (auto mode : {JitterMode::Generic, JitterMode::Sinc}) {
        double prev = 0.0;
        for (double nu = 0.0; nu < 0.5; nu += 0.01) {
            const double v = of_jitter(10.0, 0.1, nu, mode);
            CHECK(v >= prev);
            prev = v;
        }
    }

    // First order in nu: T Omega shrinks by 2 nu (generic).
    const double x0 = admissible_t_omega(10.0, 0.1, 0.0, JitterMode::Generic);
    const double nu = 1e-5;
    CHECK((x0 - admissible_t_omega(10.0, 0.1, nu, JitterMode::Generic)) / nu == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("jitter predicate")
{
    CHECK(jitter_condition_holds(1.0, 0.0, 0.0, std::sqrt(0.99)));
    const double x = admissible_t_omega(10.0, 0.0, 0.0, JitterMode::Generic);
    CHECK(x == doctest::Approx(std::sqrt(0.1)));
    CHECK_FALSE(jitter_condition_holds(0.25, 0.0, 0.0, 2.0));
    CHECK_FALSE(jitter_condition_holds(1.0, 0.25, 0.0, 0.0));

    const CounterRng rng(6);
    int checked = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const double rho = rng.uniform(4 * i, 1.0, 40.0);
        const double e = rng.uniform(4 * i + 1, 0.0, 0.24);
        const double nu = rng.uniform(4 * i + 2, 0.0, 0.45);
        const double of = rng.uniform(4 * i + 3, 2.0, 80.0);
        const double bound = of_jitter(rho, e, nu, JitterMode::Generic);
        if (std::abs(of - bound) < 1e-9 * bound)
            continue;
        ++checked;
        CHECK(jitter_condition_holds(rho, e, nu, std::numbers::pi / of) == (of > bound));
    }
    CHECK(checked > 1900);
}

TEST_CASE("SINAD and ENOB gain")
{
    auto g = sinad_gain_theory(1.0);
    CHECK(g.sinad_db == 0.0);
    CHECK(g.enob_bits == 0.0);
    g = sinad_gain_theory(108.0);
    CHECK(std::abs(g.sinad_db - 40.67) <= 0.01);
    CHECK(std::abs(g.enob_bits - 6.75) <= 0.01);
    g = sinad_gain_theory(10.0);
    CHECK(g.sinad_db == doctest::Approx(20.0));
    CHECK(g.enob_bits == doctest::Approx(3.321928094887362));
}
