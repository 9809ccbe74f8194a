#pragma once

// Bandlimited test signals and their sampling grids.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace modsamp {

/// sum_i a_i * sinc(2B (t - tau_i)) with the normalized sinc.
struct SincMixture {
    std::vector<double> coeffs;
    std::vector<double> shifts;  // seconds
    double bandwidth_hz = 0.5;
    /// Draw coeffs i.i.d. U[-1, 1] from the seed (one per shift) instead of using `coeffs`.
    bool random_coeffs = false;
};

/// A cos(2 pi f t + phi). Its bandwidth is taken to be f.
struct Tone {
    double freq_hz = 1.0;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Samples of a recorded waveform on a (nominally) uniform grid, interpolated with sinc kernels.
struct Tabulated {
    std::vector<double> times;
    std::vector<double> values;
    double bandwidth_hz = 0.0;
    std::string source;  // informational (file path)
};

using SignalKind = std::variant<SincMixture, Tone, Tabulated>;

struct SignalSpec {
    SignalKind kind = SincMixture{};
    double start = 0.0;     // seconds
    double duration = 1.0;  // seconds
    /// Requested sup-norm after rescaling (rho * lambda). Unset keeps the native amplitude.
    std::optional<double> target_peak;
};

/// Six unit-spaced sincs with random coefficients over a window centred on the shifts.
SignalSpec random_sinc_mixture_spec(double bandwidth_hz, double duration, std::size_t terms = 6);

double sinc(double x) noexcept;

/// Immutable evaluator g(t). Cheap to copy; safe to share between threads.
class Signal {
public:
    double operator()(double t) const;
    double bandwidth_hz() const noexcept { return bandwidth_hz_; }
    double omega() const noexcept;
    double peak() const noexcept { return peak_; }
    double start() const noexcept { return start_; }
    double end() const noexcept { return end_; }
    /// Coefficients actually used (after random draws and peak scaling); empty for tones.
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

private:
    friend Signal gen_signal(const SignalSpec& spec, std::uint64_t seed);

    SignalKind kind_;
    std::vector<double> coeffs_;
    double scale_ = 1.0;
    double bandwidth_hz_ = 0.0;
    double peak_ = 0.0;
    double start_ = 0.0;
    double end_ = 0.0;
    double table_period_ = 0.0;
};

/// Throws ConfigError on an invalid spec.
Signal gen_signal(const SignalSpec& spec, std::uint64_t seed);

/// max |g(t)| on [t0, t1]: dense scan at 256x the Nyquist rate, then golden-section refinement.
double find_peak(const std::function<double(double)>& g, double t0, double t1, double bandwidth_hz);

struct SamplingGrid {
    double t0 = 0.0;
    double period = 1.0;
    std::size_t count = 0;
    /// Jitter offsets mu_k; empty for a uniform grid.
    std::vector<double> offsets;
    double jitter = 0.0;  // nu

    bool is_uniform() const noexcept { return offsets.empty(); }
    double instant(std::size_t k) const noexcept;
    std::vector<double> instants() const;
};

SamplingGrid make_uniform_grid(double t0, double period, std::size_t count);

/// mu_k i.i.d. uniform on (-nu T, nu T). Requires 0 <= nu < 1/2.
SamplingGrid make_jitter_grid(double period, std::size_t count, double nu, std::uint64_t seed, double t0 = 0.0);

struct SampledSignal {
    std::vector<double> values;
    SamplingGrid grid;
    double bandwidth_hz = 0.0;
    std::optional<double> lambda;
};

/// gamma[k] = g(t_k). Throws DataError when an instant falls outside the signal window.
SampledSignal sample(const Signal& g, const SamplingGrid& grid);

enum class BernsteinVariant { Generic, Sinc };

/// Upper bound on ||g^(N)||_inf: Omega^N ||g|| (generic) or Omega^N/(N+1) ||g|| (single sinc).
double bernstein_bound(double omega, double peak, int order, BernsteinVariant variant);
double bernstein_bound(const Signal& g, int order, BernsteinVariant variant);

}  // namespace modsamp
