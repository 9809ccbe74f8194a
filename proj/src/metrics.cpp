#include "modsamp/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "modsamp/error.hpp"

namespace modsamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_length(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw DataError("metric inputs differ in length");
    if (a.empty())
        throw DataError("metric inputs are empty");
}

double error_energy(std::span<const double> truth, std::span<const double> estimate)
{
    double e = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const double d = truth[k] - estimate[k];
        e += d * d;
    }
    return e;
}

}  // namespace

double cap_db(double db) noexcept
{
    return db > kSnrCapDb ? kSnrCapDb : db;
}

double snr_r(std::span<const double> truth, std::span<const double> estimate)
{
    require_same_length(truth, estimate);
    double signal = 0.0;
    for (double v : truth)
        signal += v * v;
    if (!(signal > 0.0))
        throw DataError("snr_r: reference has zero energy");
    const double err = error_energy(truth, estimate);
    if (err == 0.0)
        return kInf;
    return 10.0 * std::log10(signal / err);
}

double psnr(std::span<const double> truth, std::span<const double> estimate, double peak)
{
    require_same_length(truth, estimate);
    if (!(peak > 0.0))
        throw DataError("psnr: peak must be positive");
    const double mse = error_energy(truth, estimate) / static_cast<double>(truth.size());
    if (mse == 0.0)
        return kInf;
    return 10.0 * std::log10(peak * peak / mse);
}

double sinad_single_tone(std::span<const double> samples, double f0, double fs)
{
    if (!(fs > 0.0) || !(f0 > 0.0) || !(f0 < 0.5 * fs))
        throw DataError("sinad: tone frequency must lie in (0, fs/2)");
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (static_cast<double>(n) * f0 / fs < 10.0)
        throw DataError("sinad: window shorter than ten tone periods");

    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    const double w = 2.0 * std::numbers::pi * f0 / fs;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double ph = w * static_cast<double>(k);
        a(k, 0) = std::cos(ph);
        a(k, 1) = std::sin(ph);
        a(k, 2) = 1.0;
        y(k) = samples[static_cast<std::size_t>(k)];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd residual = y - a * c;
    const double tone_power = 0.5 * (c(0) * c(0) + c(1) * c(1));
    const double noise_power = residual.squaredNorm() / static_cast<double>(n);
    if (noise_power <= 1e-24 * tone_power)
        return kInf;
    return 10.0 * std::log10(tone_power / noise_power);
}

double enob(double sinad_db)
{
    return (sinad_db - 1.76) / 6.02;
}

}  // namespace modsamp
