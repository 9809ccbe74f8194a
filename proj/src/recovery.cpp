#include "modsamp/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "modsamp/channel.hpp"
#include "modsamp/error.hpp"

namespace modsamp {

void validate(const RecoveryConfig& cfg)
{
    if (cfg.order < 1)
        throw ConfigError("difference order must be >= 1");
    if (cfg.order > 16)
        throw ConfigError("difference order must be <= 16");
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda))
        throw ConfigError("lambda must be positive");
    if (!(cfg.beta_g > 0.0) || !std::isfinite(cfg.beta_g))
        throw ConfigError("beta_g must be positive");
    if (const auto* ls = std::get_if<NonUniformLsReconstruction>(&cfg.reconstruction)) {
        if (ls->bandwidth_hz < 0.0 || !(ls->ridge >= 0.0))
            throw ConfigError("non-uniform reconstruction needs bandwidth >= 0 and ridge >= 0");
    }
}

int block_length(const RecoveryConfig& cfg)
{
    const double ratio = cfg.beta_g / cfg.lambda;
    double j = 0.0;
    switch (cfg.block_policy) {
    case BlockPolicy::Revised:
        j = std::ceil(4.0 * (ratio + std::ldexp(1.0, cfg.order - 2)));
        break;
    case BlockPolicy::Baseline:
        j = std::ceil(6.0 * ratio);
        break;
    case BlockPolicy::Jitter:
        j = std::ceil(4.0 * ratio + 2.0);
        break;
    }
    return std::max(2, static_cast<int>(j));
}

Sequence difference_residual(const Sequence& y, int order, double lambda)
{
    Sequence d = diff_n(y, order);
    for (double& v : d.values)
        v = fold(v, lambda) - v;
    return round_to_lattice(d, lambda);
}

KappaEstimate estimate_kappa_detail(const Sequence& probe, int block, double lambda)
{
    if (block < 1)
        throw ConfigError("block length must be >= 1");
    if (probe.size() < static_cast<std::size_t>(block) + 1)
        throw DataError("kappa probe needs at least J+1 values");
    const double ratio = (probe.values[0] - probe.values[static_cast<std::size_t>(block)]) /
                         (2.0 * static_cast<double>(block) * lambda);
    return {static_cast<long>(std::floor(ratio + 0.5)), ratio};
}

long estimate_kappa(const Sequence& probe, int block, double lambda)
{
    return estimate_kappa_detail(probe, block, lambda).kappa;
}

namespace {

// One running sum. The sum of (Delta^p eps) from index o gives Delta^(p-1) eps from o+1 on,
// minus Delta^(p-1) eps[o].
Sequence lower_order(const Sequence& s, double lambda)
{
    Sequence e = round_to_lattice(antidiff(s), lambda);
    e.origin += 1;
    return e;
}

}  // namespace

RecoveryResult recover_fixed_order(const Sequence& y, const RecoveryConfig& cfg)
{
    validate(cfg);
    const int order = cfg.order;
    const double lambda = cfg.lambda;
    const int block = block_length(cfg);
    if (y.size() < static_cast<std::size_t>(block + order + 2))
        throw DataError("recovery needs at least J+N+2 = " + std::to_string(block + order + 2) + " samples, got " +
                        std::to_string(y.size()));
    for (double v : y.values)
        if (!std::isfinite(v))
            throw DataError("recovery input contains non-finite samples");

    RecoveryResult out;
    out.block_length = block;

    Sequence s = difference_residual(y, order, lambda);
    for (int n = 0; n + 1 < order; ++n) {
        Sequence e = lower_order(s, lambda);
        const long kappa = estimate_kappa(antidiff(e), block, lambda);
        for (double& v : e.values)
            v += 2.0 * lambda * static_cast<double>(kappa);
        out.kappa_trace.push_back(kappa);
        s = std::move(e);
    }
    Sequence eps = lower_order(s, lambda);

    out.unfolded = eps;
    for (std::size_t i = 0; i < eps.size(); ++i)
        out.unfolded.values[i] += y.at_index(eps.origin + static_cast<long>(i));
    out.valid_window = {out.unfolded.origin, y.end_index() - order};

    const auto first = out.unfolded.values.begin() + (out.valid_window.begin - out.unfolded.origin);
    const auto last = first + out.valid_window.size();
    const auto [lo, hi] = std::minmax_element(first, last);
    const double span = (first == last) ? 0.0 : *hi - *lo;
    out.success = span <= 2.0 * (cfg.beta_g + lambda);
    if (!out.success)
        out.diagnostic = "unfolded span exceeds 2 (beta_g + lambda): unwrap contract likely violated";
    return out;
}

RecoveryResult recover_jitter_n2(const Sequence& y, const SamplingGrid& grid, const RecoveryConfig& cfg)
{
    if (cfg.order != 2)
        throw ConfigError("the jitter pipeline is defined for second-order differences only");
    if (grid.count != y.size() || y.origin != 0)
        throw DataError("grid and samples differ in length or indexing");
    RecoveryResult out = recover_fixed_order(y, cfg);
    out.instants.reserve(out.unfolded.size());
    for (long k = out.unfolded.origin; k < out.unfolded.end_index(); ++k)
        out.instants.push_back(grid.instant(static_cast<std::size_t>(k)));
    return out;
}

Alignment align_2lambda(const Sequence& recovered, const Sequence& reference, double lambda)
{
    if (!(lambda > 0.0))
        throw ConfigError("lambda must be positive");
    const long begin = std::max(recovered.origin, reference.origin);
    const long end = std::min(recovered.end_index(), reference.end_index());
    if (end <= begin)
        throw DataError("recovered and reference sequences do not overlap");

    std::vector<double> diff;
    diff.reserve(static_cast<std::size_t>(end - begin));
    for (long k = begin; k < end; ++k)
        diff.push_back(recovered.at_index(k) - reference.at_index(k));
    const auto mid = diff.begin() + static_cast<long>(diff.size() / 2);
    std::nth_element(diff.begin(), mid, diff.end());
    double median = *mid;
    if (diff.size() % 2 == 0)
        median = 0.5 * (median + *std::max_element(diff.begin(), mid));

    Alignment out;
    out.m = static_cast<long>(std::floor(median / (2.0 * lambda) + 0.5));
    out.aligned = recovered;
    for (double& v : out.aligned.values)
        v -= 2.0 * lambda * static_cast<double>(out.m);
    return out;
}

}  // namespace modsamp
