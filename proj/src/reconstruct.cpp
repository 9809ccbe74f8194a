#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "modsamp/error.hpp"
#include "modsamp/recovery.hpp"

namespace modsamp {

std::vector<double> sinc_interpolate(const Sequence& samples, double period, std::span<const double> query,
                                     double t0)
{
    if (!(period > 0.0))
        throw ConfigError("sampling period must be positive");
    std::vector<double> out(query.size(), 0.0);
    for (std::size_t q = 0; q < query.size(); ++q) {
        const double u = (query[q] - t0) / period - static_cast<double>(samples.origin);
        double acc = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            acc += samples.values[i] * sinc(u - static_cast<double>(i));
        out[q] = acc;
    }
    return out;
}

std::vector<double> sinc_interpolate(const Sequence& samples, const SamplingGrid& grid,
                                     std::span<const double> query)
{
    if (!grid.is_uniform())
        throw ConfigError("sinc interpolation needs a uniform grid; use the non-uniform least-squares fit");
    return sinc_interpolate(samples, grid.period, query, grid.t0);
}

std::vector<double> nonuniform_ls_reconstruct(std::span<const double> times, std::span<const double> values,
                                              double bandwidth_hz, double ridge, double nominal_period,
                                              std::span<const double> query)
{
    const std::size_t n = times.size();
    if (n != values.size())
        throw DataError("instants and values differ in length");
    if (n < 3)
        throw DataError("non-uniform reconstruction needs at least 3 samples");
    if (!(bandwidth_hz > 0.0) || !(nominal_period > 0.0) || !(ridge >= 0.0))
        throw ConfigError("non-uniform reconstruction needs positive bandwidth and period, ridge >= 0");
    for (std::size_t k = 1; k < n; ++k)
        if (!(times[k] > times[k - 1]))
            throw DataError("sampling instants must be strictly increasing (row " + std::to_string(k) + ")");
    const double mean_rate = static_cast<double>(n - 1) / (times[n - 1] - times[0]);
    if (!(mean_rate > 2.0 * bandwidth_hz))
        throw DataError("average sampling rate is not above the Nyquist rate 2B");

    const double span = static_cast<double>(n) * nominal_period;
    const auto harmonics = static_cast<long>(std::floor(bandwidth_hz * span + 1e-9));
    const long cols = 2 * harmonics + 1;
    if (static_cast<long>(n) < cols)
        throw DataError("fewer samples than basis functions");
    const double w = 2.0 * std::numbers::pi / span;
    const double tref = times[0];

    auto basis_row = [&](double t, auto&& row) {
        row(0) = 1.0;
        for (long j = 1; j <= harmonics; ++j) {
            const double phase = w * static_cast<double>(j) * (t - tref);
            row(2 * j - 1) = std::cos(phase);
            row(2 * j) = std::sin(phase);
        }
    };

    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), cols);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        basis_row(times[k], a.row(static_cast<Eigen::Index>(k)));
        b(static_cast<Eigen::Index>(k)) = values[k];
    }

    Eigen::MatrixXd gram = a.transpose() * a;
    const double scale = gram.trace() / static_cast<double>(cols);
    gram.diagonal().array() += ridge * scale;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-14)
        throw RankDeficientError("normal equations are rank deficient at ridge " + std::to_string(ridge));
    const Eigen::VectorXd coef = ldlt.solve(a.transpose() * b);

    std::vector<double> out(query.size());
    Eigen::RowVectorXd row(cols);
    for (std::size_t q = 0; q < query.size(); ++q) {
        basis_row(query[q], row);
        out[q] = row.dot(coef);
    }
    return out;
}

}  // namespace modsamp
