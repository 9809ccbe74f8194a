#include "modsamp/diffcalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modsamp/error.hpp"

namespace modsamp {

Sequence diff_n(const Sequence& x, int order)
{
    if (order < 1)
        throw ConfigError("difference order must be >= 1");
    if (x.size() <= static_cast<std::size_t>(order))
        throw DataError("sequence too short for difference order " + std::to_string(order));

    std::vector<double> v = x.values;
    for (int n = 0; n < order; ++n) {
        for (std::size_t k = 0; k + 1 < v.size(); ++k)
            v[k] = v[k + 1] - v[k];
        v.pop_back();
    }
    return {std::move(v), x.origin};
}

Sequence antidiff(const Sequence& x)
{
    if (x.empty())
        throw DataError("anti-difference of an empty sequence");
    Sequence out = x;
    double acc = 0.0;
    for (double& v : out.values) {
        acc += v;
        v = acc;
    }
    return out;
}

double round_to_lattice(double v, double lambda) noexcept
{
    const double two_lambda = 2.0 * lambda;
    return two_lambda * std::floor(v / two_lambda + 0.5);
}

Sequence round_to_lattice(const Sequence& s, double lambda)
{
    if (!(lambda > 0.0))
        throw ConfigError("lambda must be positive");
    Sequence out = s;
    for (double& v : out.values)
        v = round_to_lattice(v, lambda);
    return out;
}

double inf_norm(std::span<const double> x) noexcept
{
    double m = 0.0;
    for (double v : x)
        m = std::max(m, std::abs(v));
    return m;
}

}  // namespace modsamp
