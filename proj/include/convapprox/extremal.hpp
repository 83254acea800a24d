#pragma once

#include "convapprox/norms.hpp"
#include "convapprox/series_kernels.hpp"

#include <optional>
#include <span>
#include <vector>

namespace convapprox {

/// Parameters of the extremal function phi_{n,p} and of its convolution with the kernel.
/// `delta` is the spike width parameter, used only for p = 1.
struct WitnessSpec {
    long n;
    double p;
    PsiSequence psi;
    BetaSequence beta = BetaSequence::constant(0.0);
    std::optional<double> delta;

    double p_prime() const { return conjugate_exponent(p); }
};

struct WitnessOptions {
    /// Truncation tolerance for the tail of the harmonic series, relative to the
    /// amplitude of the leading harmonic.
    double series_tol = 1e-12;
    /// Hard cap on the highest harmonic index j (frequency j n).
    long max_harmonic = 1L << 20;
};

/// Witness data. f = F1 + F2 is the convolution of phi with the kernel; F1 is its
/// frequency-n part and F2 the rest. `points` are the 2n alternation points.
struct ExtremalWitness {
    WitnessSpec spec;
    PeriodicFunction phi;
    PeriodicFunction f;
    PeriodicFunction F1;
    PeriodicFunction F2;
    std::vector<double> points;

    double delta = 0.0;             ///< spike width actually used (p = 1), else 0
    double lead_amplitude = 0.0;    ///< |F1(x_m)|
    double tail = 0.0;              ///< sum_{k>n} psi(k)
    double f2_sup_bound = 0.0;      ///< Hoelder bound on ||F2||_C
    long harmonics = 0;             ///< highest j kept in the series
    double truncation_bound = 0.0;  ///< bound on the dropped part of the series
};

double phi_eval(const WitnessSpec& spec, double t);

/// phi_{n,p} as a PeriodicFunction with its kinks/discontinuities marked.
PeriodicFunction phi_function(const WitnessSpec& spec);

/// Cosine coefficient of phi at frequency j n, for j = 1..j_max.
/// Sine coefficients and frequencies that are not multiples of n vanish.
std::vector<double> phi_harmonics(const WitnessSpec& spec, long j_max);

/// x_m = beta_n pi / (2n) + m pi / n, m = 0..2n-1.
std::vector<double> alternation_points(long n, double beta_n);

/// Largest delta = pi / 2^j, j >= 2, for which (2/delta) sin(delta/2) psi(n) - tail
/// keeps at least half of psi(n) - tail.
double default_delta(long n, const PsiSequence& psi);

/// Spike-width condition: (2/delta) sin(delta/2) psi(n) > sum_{k>n} psi(k).
bool delta_admissible(long n, const PsiSequence& psi, double delta);

ExtremalWitness build_witness(const WitnessSpec& spec, const WitnessOptions& opts = {});

/// min_m |f(x_m)|, after checking that f(x_m) alternates in sign.
double vallee_poussin_lower(const PeriodicFunction& f, std::span<const double> points);
double vallee_poussin_lower(const ExtremalWitness& witness);

} // namespace convapprox
