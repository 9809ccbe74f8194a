#pragma once

// End-to-end trials and Monte-Carlo sweeps.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modsamp/channel.hpp"
#include "modsamp/metrics.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/signals.hpp"

namespace modsamp {

struct SuccessRule {
    enum class Kind {
        ExactResidual,  // recovered residual equals the true one on the valid window
        SnrThreshold,   // aligned SNR_r >= threshold_db
    };
    Kind kind = Kind::ExactResidual;
    double threshold_db = 0.0;
};

struct TrialReport {
    bool success = false;
    std::string failure;  // empty on success
    MetricsReport metrics;
    RecoveryResult recovery;
    SamplingGrid grid;
    std::vector<double> truth;     // gamma[k]
    std::vector<double> measured;  // y_eta[k]
    std::vector<double> noise;     // eta[k]
    double rho = 0.0;
    double rho_eta = 0.0;  // realized max |eta| / lambda
    /// Sufficient condition evaluated on the realized signal, noise and grid.
    bool premise_holds = false;
    /// Continuous-time SNR of the configured reconstruction against g(t) on the interior
    /// query grid; unset for NoReconstruction or when reconstruction fails.
    std::optional<double> reconstruction_snr_db;
};

/// Query instants at a quarter of the nominal period, covering [first, last] of `instants`
/// with `trim` of the span cut from each end.
std::vector<double> interior_queries(std::span<const double> instants, double period, double trim = 0.1);

/// Sampling period implied by the channel's oversampling factor for this signal.
double sampling_period(const Signal& g, const ChannelConfig& channel);

/// generate -> sample -> transmit -> recover -> align -> metrics. Deterministic in `seed`.
/// A non-positive recovery.beta_g is replaced by the realized signal peak.
/// Errors inside the pipeline are reported as a failed trial; an inconsistent lambda throws.
TrialReport run_trial(const SignalSpec& signal, const ChannelConfig& channel, const RecoveryConfig& recovery,
                      std::uint64_t seed, SuccessRule rule = {});

struct SweepAxis {
    std::string name;  // rho, of, rho_eta, nu, bits, snr_db, order
    std::vector<double> values;
};

/// Inclusive arithmetic range; the stop value is kept when it lies within 1e-9 step of the grid.
SweepAxis make_axis(std::string name, double start, double stop, double step);

struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    int trials_per_cell = 1;
    SignalSpec signal;
    ChannelConfig channel;
    RecoveryConfig recovery;
    SuccessRule success_rule;
    std::uint64_t base_seed = 0;
};

void validate(const SweepSpec& spec);

struct CellResult {
    std::vector<double> axis_values;
    double mean_snr_r_db = 0.0;  // infinite SNRs enter the mean as kSnrCapDb
    double success_rate = 0.0;
    double theory_of_rsod = 0.0;       // generic second-order bound
    double theory_of_rsod_sinc = 0.0;  // sinc-specific second-order bound
    double theory_of_jitter = 0.0;     // generic jitter-aware bound
    int trials = 0;
    int failures = 0;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<CellResult> cells;  // axis1-major order
};

/// Seed of trial t in cell c: derive_seed(base_seed, c, t).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell, std::size_t trial) noexcept;

/// Runs every (cell, trial) on `parallelism` worker threads. Output is independent of parallelism.
SweepResult run_sweep(const SweepSpec& spec, unsigned parallelism = 1);

/// Long-format CSV, one row per cell.
std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

/// Smallest axis value (ascending) whose success rate reaches `rate`, restricted to cells whose
/// other axis equals `other` (when the sweep is two-dimensional). Empty when never reached.
std::optional<double> success_frontier(const SweepResult& result, std::size_t axis, double rate,
                                       std::optional<double> other = std::nullopt);

}  // namespace modsamp
