#pragma once

// Forward differences, the anti-difference (running sum) and 2-lambda lattice rounding.

#include <cstddef>
#include <span>
#include <vector>

namespace modsamp {

/// A finite stretch of a sequence x[k]; values[i] holds x[origin + i].
struct Sequence {
    std::vector<double> values;
    long origin = 0;

    Sequence() = default;
    Sequence(std::vector<double> v, long o = 0) : values(std::move(v)), origin(o) {}

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    /// One past the last absolute index.
    long end_index() const noexcept { return origin + static_cast<long>(values.size()); }
    double at_index(long k) const { return values.at(static_cast<std::size_t>(k - origin)); }
};

/// (Delta^N x)[k] for every k whose stencil x[k..k+N] is available. Length shrinks by N.
Sequence diff_n(const Sequence& x, int order);

/// out[k] = x[1] + ... + x[k] in 1-based terms; same length and origin as the input.
Sequence antidiff(const Sequence& x);

/// Snap every value to the nearest element of 2 lambda Z, ties rounding up.
Sequence round_to_lattice(const Sequence& s, double lambda);
double round_to_lattice(double v, double lambda) noexcept;

double inf_norm(std::span<const double> x) noexcept;

}  // namespace modsamp
