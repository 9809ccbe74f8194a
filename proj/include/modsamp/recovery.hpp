#pragma once

// Difference-based unwrapping of modulo samples and bandlimited reconstruction.
//
// Given y[k] = M(gamma[k]) + eta[k], the N-th difference of the unknown residual
// eps = gamma - M(gamma) in 2 lambda Z is read off as M(Delta^N y) - Delta^N y whenever
// |Delta^N gamma + Delta^N eta| < lambda. The residual is then rebuilt by N running sums.
// Each running sum loses a constant in 2 lambda Z; all but the last are resolved from a
// J-sample probe window, the last one is the global 2 m lambda ambiguity.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "modsamp/diffcalc.hpp"
#include "modsamp/signals.hpp"

namespace modsamp {

enum class BlockPolicy {
    Revised,   // J = ceil(4 (beta/lambda + 2^(N-2)))
    Baseline,  // J = ceil(6 beta/lambda)
    Jitter,    // J = ceil(4 beta/lambda + 2)
};

struct NoReconstruction {};
struct SincReconstruction {};
struct NonUniformLsReconstruction {
    double bandwidth_hz = 0.0;  // 0: take it from the signal metadata
    double ridge = 1e-8;
};
using Reconstruction = std::variant<NoReconstruction, SincReconstruction, NonUniformLsReconstruction>;

struct RecoveryConfig {
    int order = 2;
    double lambda = 1.0;
    double beta_g = 1.0;  // amplitude prior, >= ||g||_inf
    BlockPolicy block_policy = BlockPolicy::Revised;
    Reconstruction reconstruction = NoReconstruction{};
};

void validate(const RecoveryConfig& cfg);

/// Probe block length J for the configured policy; never below 2.
int block_length(const RecoveryConfig& cfg);

/// Half-open range of absolute sample indices.
struct IndexRange {
    long begin = 0;
    long end = 0;
    long size() const noexcept { return end > begin ? end - begin : 0; }
    bool contains(long k) const noexcept { return k >= begin && k < end; }
};

struct RecoveryResult {
    /// gamma~[k] = gamma[k] + eta[k] + 2 m lambda; indexed like the input samples.
    Sequence unfolded;
    IndexRange valid_window;
    std::vector<long> kappa_trace;
    /// Set only after alignment against a reference.
    std::optional<long> global_m;
    int block_length = 0;
    /// Blind consistency check: the unfolded span must fit inside 2 (beta_g + lambda).
    bool success = false;
    std::string diagnostic;
    /// Sampling instants matching `unfolded` (jitter pipeline only).
    std::vector<double> instants;
};

/// M(Delta^N y) - Delta^N y, snapped to 2 lambda Z. Equals Delta^N eps under the recovery premise.
Sequence difference_residual(const Sequence& y, int order, double lambda);

struct KappaEstimate {
    long kappa = 0;
    /// Unrounded (probe[1] - probe[J+1]) / (2 J lambda); its distance to kappa is the guard used.
    double ratio = 0.0;
};

/// `probe` is the running sum of a stage output that is known up to a constant -2 lambda kappa.
/// Reads the probe at its 1st and (J+1)-th entries (1-based).
KappaEstimate estimate_kappa_detail(const Sequence& probe, int block, double lambda);
long estimate_kappa(const Sequence& probe, int block, double lambda);

/// Fixed-order recovery. Out-of-contract inputs give success == false, not an exception;
/// structural problems (too few samples, bad config) throw.
RecoveryResult recover_fixed_order(const Sequence& y, const RecoveryConfig& cfg);

/// Second-order unwrapping on a jittered grid. Requires cfg.order == 2. The unwrapped samples are
/// paired with the grid instants for non-uniform reconstruction.
RecoveryResult recover_jitter_n2(const Sequence& y, const SamplingGrid& grid, const RecoveryConfig& cfg);

struct Alignment {
    Sequence aligned;
    long m = 0;
};

/// m = round(median(rec - ref) / (2 lambda)) over the overlapping indices; aligned = rec - 2 m lambda.
Alignment align_2lambda(const Sequence& recovered, const Sequence& reference, double lambda);

/// Whittaker-Shannon sum; sample i of `samples` sits at t0 + (origin + i) T.
std::vector<double> sinc_interpolate(const Sequence& samples, double period, std::span<const double> query,
                                     double t0 = 0.0);
/// Same, taking the instants from a uniform grid. Jittered grids are rejected.
std::vector<double> sinc_interpolate(const Sequence& samples, const SamplingGrid& grid,
                                     std::span<const double> query);

/// Ridge-regularized least-squares fit of real exponentials at j / (L T), |j / (L T)| <= B,
/// evaluated at `query`. Throws RankDeficientError if the normal equations are singular at the
/// configured ridge and DataError for non-increasing instants or a sub-Nyquist average rate.
std::vector<double> nonuniform_ls_reconstruct(std::span<const double> times, std::span<const double> values,
                                              double bandwidth_hz, double ridge, double nominal_period,
                                              std::span<const double> query);

}  // namespace modsamp
