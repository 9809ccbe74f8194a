#pragma once

#include <optional>
#include <span>

namespace modsamp {

/// Serialized stand-in for an infinite SNR (exact reconstruction) so CSV columns stay numeric.
inline constexpr double kSnrCapDb = 400.0;

/// min(db, kSnrCapDb); also maps +inf to the cap.
double cap_db(double db) noexcept;

struct MetricsReport {
    double snr_r = 0.0;  // dB, +inf when exact
    double psnr = 0.0;   // dB, +inf when exact
    std::optional<double> sinad;
    std::optional<double> enob;
    double max_abs_err = 0.0;
    bool success = false;
};

/// 10 log10(sum gamma^2 / sum (gamma - estimate)^2). Throws DataError on zero signal energy or
/// length mismatch.
double snr_r(std::span<const double> truth, std::span<const double> estimate);

/// 10 log10(peak^2 / mean (gamma - estimate)^2).
double psnr(std::span<const double> truth, std::span<const double> estimate, double peak);

/// Fits DC + cos + sin at f0 by least squares; SINAD = tone power / residual power in dB.
/// Needs f0 < fs/2 and at least ten periods.
double sinad_single_tone(std::span<const double> samples, double f0, double fs);

/// (SINAD - 1.76) / 6.02.
double enob(double sinad_db);

}  // namespace modsamp
