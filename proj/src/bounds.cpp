#include "modsamp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "modsamp/error.hpp"

namespace modsamp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

void require_rho(double rho)
{
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw ConfigError("rho must be positive");
}

void require_rho_eta(double rho_eta)
{
    if (!(rho_eta >= 0.0) || !std::isfinite(rho_eta))
        throw ConfigError("rho_eta must be >= 0");
}

double noisy_fixed_order(double rho, double budget, int order)
{
    return kPi * std::pow(rho / budget, 1.0 / static_cast<double>(order));
}

}  // namespace

int nmin(double rho, double of, NminMode mode)
{
    require_rho(rho);
    const double base = mode == NminMode::Baseline ? kPi * kE : kPi;
    if (!(of > base))
        throw InfeasibleError(mode == NminMode::Baseline ? "baseline order formula needs OF > pi e"
                                                         : "revised order formula needs OF > pi");
    if (rho <= 1.0)
        return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(rho) / std::log(of / base))));
}

double of_required(OfVariant variant, const BoundQuery& q)
{
    require_rho(q.rho);
    require_rho_eta(q.rho_eta);
    switch (variant) {
    case OfVariant::NoisyFixedN: {
        if (q.order < 1)
            throw ConfigError("difference order must be >= 1");
        const double budget = 1.0 - std::ldexp(q.rho_eta, q.order);
        if (!(budget > 0.0))
            throw InfeasibleError("infeasible: 2^N rho_eta >= 1");
        return noisy_fixed_order(q.rho, budget, q.order);
    }
    case OfVariant::Quantized: {
        if (q.order < 1)
            throw ConfigError("difference order must be >= 1");
        if (q.bits <= q.order)
            throw InfeasibleError("infeasible: quantized bound needs b > N");
        return noisy_fixed_order(q.rho, 1.0 - std::ldexp(1.0, q.order - q.bits), q.order);
    }
    case OfVariant::RSoD:
    case OfVariant::RSoDSinc: {
        const double budget = 1.0 - 4.0 * q.rho_eta;
        if (!(budget > 0.0))
            throw InfeasibleError("infeasible: second-order bounds need rho_eta < 1/4");
        const double shape = variant == OfVariant::RSoDSinc ? 3.0 : 1.0;
        return kPi * std::sqrt(q.rho / (shape * budget));
    }
    }
    throw ConfigError("unknown bound variant");
}

BaselineNoisyBound of_baseline_noisy(double rho, double rho_eta, bool with_e, int alpha_cap)
{
    require_rho(rho);
    require_rho_eta(rho_eta);
    for (int alpha = 1; alpha <= alpha_cap; ++alpha) {
        const double admissible = 0.25 * std::pow(2.0 * rho, -1.0 / static_cast<double>(alpha));
        if (rho_eta < admissible) {
            const double of = std::ldexp(kPi, alpha) * (with_e ? kE : 1.0);
            return {alpha, of};
        }
    }
    throw InfeasibleError("no admissible alpha <= " + std::to_string(alpha_cap));
}

double admissible_t_omega(double rho, double rho_eta, double nu, JitterMode mode)
{
    require_rho(rho);
    require_rho_eta(rho_eta);
    if (!(nu >= 0.0))
        throw ConfigError("jitter level must be >= 0");
    const double slack = (1.0 - 4.0 * rho_eta) / rho;
    if (!(slack > 0.0))
        throw InfeasibleError("infeasible: jitter bounds need rho_eta < 1/4");
    if (mode == JitterMode::Generic)
        return -2.0 * nu + std::sqrt(4.0 * nu * nu + slack);
    return -3.0 * nu + std::sqrt(3.0) * std::sqrt(3.0 * nu * nu + slack);
}

double of_jitter(double rho, double rho_eta, double nu, JitterMode mode)
{
    return kPi / admissible_t_omega(rho, rho_eta, nu, mode);
}

bool jitter_condition_holds(double rho, double rho_eta, double nu, double t_omega)
{
    return rho * (t_omega * t_omega + 4.0 * nu * t_omega) + 4.0 * rho_eta < 1.0;
}

SinadGain sinad_gain_theory(double rho)
{
    if (!(rho >= 1.0))
        throw ConfigError("rho must be >= 1");
    return {20.0 * std::log10(rho), std::log2(rho)};
}

}  // namespace modsamp
