#pragma once

// Closed-form difference-order and oversampling conditions.
//
// Every bound returns the open threshold: recovery is guaranteed for OF strictly above the
// returned value. Infeasible parameter combinations throw InfeasibleError.

namespace modsamp {

enum class NminMode {
    Baseline,  // ceil(log rho / log(OF / (pi e))), needs OF > pi e
    Revised,   // ceil(log rho / log(OF / pi)), needs OF > pi
};

int nmin(double rho, double of, NminMode mode);

enum class OfVariant {
    NoisyFixedN,  // pi (rho / (1 - 2^N rho_eta))^(1/N)
    Quantized,    // pi (rho / (1 - 2^(N-b)))^(1/N)
    RSoD,         // pi sqrt(rho / (1 - 4 rho_eta))
    RSoDSinc,     // pi sqrt(rho / (3 (1 - 4 rho_eta)))
};

struct BoundQuery {
    double rho = 1.0;
    double rho_eta = 0.0;
    int order = 2;
    int bits = 0;
    double nu = 0.0;
};

double of_required(OfVariant variant, const BoundQuery& q);

struct BaselineNoisyBound {
    int alpha = 0;
    double of = 0.0;
};

/// Smallest alpha with rho_eta < (2 rho)^(-1/alpha) / 4, and OF = 2^alpha pi e (or 2^alpha pi).
BaselineNoisyBound of_baseline_noisy(double rho, double rho_eta, bool with_e, int alpha_cap = 64);

enum class JitterMode { Generic, Sinc };

/// Largest admissible T Omega for second-order recovery under jitter nu.
double admissible_t_omega(double rho, double rho_eta, double nu, JitterMode mode);

/// pi / admissible_t_omega.
double of_jitter(double rho, double rho_eta, double nu, JitterMode mode);

/// rho ((T Omega)^2 + 4 nu T Omega) + 4 rho_eta < 1.
bool jitter_condition_holds(double rho, double rho_eta, double nu, double t_omega);

struct SinadGain {
    double sinad_db = 0.0;
    double enob_bits = 0.0;
};

/// (20 log10 rho, log2 rho).
SinadGain sinad_gain_theory(double rho);

}  // namespace modsamp
