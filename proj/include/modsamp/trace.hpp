#pragma once

// Trace CSV files: `time_s,input_v,folded_v` (input_v optional), LF line endings, decimal point.
// lambda and fs come from a sidecar JSON ({"lambda": .., "fs": ..}) or from the caller.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modsamp/signals.hpp"

namespace modsamp {

struct TraceMeta {
    double lambda = 1.0;
    double fs = 1.0;  // nominal sampling rate, Hz
};

struct TraceRows {
    std::vector<double> time;
    std::vector<double> input;  // empty when the file has no input_v column
    std::vector<double> folded;
};

struct IngestOptions {
    /// Folded values may exceed [-lambda, lambda) by slack * lambda (measurement noise).
    double slack = 0.05;
    /// Instants within this fraction of T of the nominal grid are treated as uniform.
    double grid_tolerance = 1e-6;
};

struct IngestedTrace {
    SampledSignal folded;
    std::optional<SampledSignal> reference;
    TraceMeta meta;
};

/// Parses the CSV body. `name` prefixes error messages; rows are reported by 1-based file line.
TraceRows read_trace_csv(std::istream& in, const std::string& name = "trace");
TraceRows read_trace_csv(const std::string& path);

/// Reads {"lambda": .., "fs": ..}; unknown keys are rejected.
TraceMeta read_sidecar(const std::string& path);

/// Validates monotone time and the fold range, and rebuilds the sampling grid: uniform when every
/// instant sits on t0 + k/fs, otherwise a jittered grid with offsets t_k - (t0 + k/fs).
IngestedTrace ingest_trace(const TraceRows& rows, const TraceMeta& meta, const IngestOptions& opt = {});
IngestedTrace ingest_trace(const std::string& path, const TraceMeta& meta, const IngestOptions& opt = {});

/// Writes a trace with %.17g so that reading it back reproduces every value exactly.
/// `input` may be null; otherwise it must match `folded` in length.
void emit_trace(std::ostream& out, const SampledSignal& folded, const std::vector<double>* input = nullptr);
void emit_trace(const std::string& path, const SampledSignal& folded, const std::vector<double>* input = nullptr);

}  // namespace modsamp
