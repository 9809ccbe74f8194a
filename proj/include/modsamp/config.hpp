#pragma once

// One JSON document with sections signal / channel / recovery / sweep. Unknown keys are errors.
//
//   "signal":   {"kind": "sinc_mixture", "bandwidth_hz", "shifts", "coeffs" | "random_coeffs",
//                "start", "duration", "rho" | "peak"}
//               {"kind": "random_sinc_mixture", "bandwidth_hz", "terms", "duration", "rho" | "peak"}
//               {"kind": "tone", "freq_hz", "amplitude", "phase", "start", "duration", "rho" | "peak"}
//               {"kind": "tabulated", "path", "bandwidth_hz", "lambda", "fs", ...}
//   "channel":  {"lambda", "bits", "noise": {"model": none|uniform|gaussian|gaussian_snr, ...},
//                "insertion": post_fold|pre_fold, "seed", "oversampling", "jitter"}
//   "recovery": {"order", "lambda", "beta_g", "block_policy": revised|baseline|jitter,
//                "reconstruction": {"method": none|sinc|nonuniform_ls, "bandwidth_hz", "ridge"}}
//   "sweep":    {"axis1": {"name", "start", "stop", "step"} | {"name", "values"}, "axis2",
//                "trials_per_cell", "success_rule": {"kind": exact_residual|snr_threshold,
//                "threshold_db"}, "base_seed"}
//
// "rho" sets the peak to rho * lambda and, unless given, beta_g to the same value.
// recovery.lambda defaults to channel.lambda.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "modsamp/channel.hpp"
#include "modsamp/harness.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/signals.hpp"

namespace modsamp {

struct ExperimentConfig {
    SignalSpec signal;
    ChannelConfig channel;
    RecoveryConfig recovery;
    SuccessRule success_rule;
    std::optional<SweepSpec> sweep;
};

/// `base_dir` resolves relative trace paths of tabulated signals.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Recovery settings for offline traces: either a full config document (its recovery section is
/// used) or a bare recovery object. `lambda` applies when the document does not set one.
RecoveryConfig load_recovery_config(const std::string& path, double lambda);

/// Compact JSON of a trial's metrics; +inf is written as kSnrCapDb.
std::string report_json(const TrialReport& report);

}  // namespace modsamp
