#pragma once

// Modulo folding, mid-rise quantization and additive noise.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "modsamp/signals.hpp"

namespace modsamp {

struct NoNoise {};

/// eta[k] i.i.d. U[-rho_eta lambda, rho_eta lambda).
struct UniformNoise {
    double rho_eta = 0.0;
};

struct GaussianNoise {
    double sigma = 0.0;
};

/// Gaussian noise whose variance is set from the measured power of the signal it is added to
/// (the folded samples for post-fold insertion, the unfolded samples for pre-fold insertion).
struct GaussianSnrNoise {
    double snr_db = 0.0;
};

using NoiseModel = std::variant<NoNoise, UniformNoise, GaussianNoise, GaussianSnrNoise>;

enum class NoiseInsertion {
    PostFold,  // y = M(gamma) + eta
    PreFold,   // y = M(gamma + eta)
};

struct ChannelConfig {
    double lambda = 1.0;
    std::optional<int> bits;
    NoiseModel noise = NoNoise{};
    NoiseInsertion insertion = NoiseInsertion::PostFold;
    std::uint64_t seed = 0;
    // Acquisition settings used by the harness when it builds the sampling grid.
    double oversampling = 10.0;  // OF = fs / (2B)
    double jitter = 0.0;         // nu
};

void validate(const ChannelConfig& cfg);

/// x - 2 lambda floor((x + lambda) / (2 lambda)), always in [-lambda, lambda).
double fold(double x, double lambda);

/// Nearest of the 2^b levels -lambda + q/2 + i q, q = 2 lambda / 2^b. Requires y in [-lambda, lambda).
double quantize(double y, double lambda, int bits);

struct ChannelOutput {
    std::vector<double> measured;  // y_eta[k]
    /// Realized noise eta[k]. With a quantizer it is measured - M(gamma) reduced to the nearest
    /// representative modulo 2 lambda. Either way gamma + noise == measured (mod 2 lambda).
    std::vector<double> noise;
};

ChannelOutput transmit(const SampledSignal& samples, const ChannelConfig& cfg);

}  // namespace modsamp
