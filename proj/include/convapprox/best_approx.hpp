#pragma once

#include "convapprox/extremal.hpp"
#include "convapprox/norms.hpp"
#include "convapprox/trig_polynomial.hpp"

#include <optional>
#include <vector>

namespace convapprox {

/// Fourier partial sum of order `order` by composite Gauss-Legendre quadrature.
/// Default panels scale with the order.
TrigPolynomiald fourier_partial_sum(const PeriodicFunction& f, long order, std::optional<QuadratureSpec> quad = {});

/// Closed-form partial sum of a class witness: f has no harmonics below n, so
/// S_{order}(f) = 0 for order <= n - 1.
TrigPolynomiald fourier_partial_sum(const ExtremalWitness& w, long order);

/// ||f - S_order(f)||_C on a grid of 4096 (order + 1) points.
double remainder_sup(const PeriodicFunction& f, long order, std::optional<QuadratureSpec> quad = {});

struct RemezOptions {
    double tol = 1e-10;
    int max_iter = 50;
    int grid_per_order = 64;
    /// Starting reference (2n points); equispaced when empty.
    std::vector<double> initial_reference;
};

struct RemezResult {
    TrigPolynomiald best;
    double value = 0.0;         ///< max |f - best|, an upper bound for E_n(f)
    double leveled_error = 0.0; ///< |h| of the final reference, a lower bound for E_n(f)
    std::vector<double> extrema;        ///< final reference points, ascending
    std::vector<double> extrema_errors; ///< f - best at the reference
    std::vector<double> level_history;  ///< |h| per iteration
    int iterations = 0;
    int alternations = 0; ///< alternating reference points with |error| >= (1 - tol) value
    bool certified = false;
};

/// Best uniform approximation of f by trigonometric polynomials of order n - 1,
/// by the exchange algorithm.
RemezResult remez_trig(const PeriodicFunction& f, long n, const RemezOptions& opts = {});

/// Same, started from the witness alternation points.
RemezResult remez_trig(const ExtremalWitness& w, RemezOptions opts = {});

} // namespace convapprox
