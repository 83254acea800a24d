#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace convapprox {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Smoothness { Smooth, Kinks, Discontinuous };

/// 2 pi-periodic real function. Evaluates to a0 / 2 + evaluator(t).
///
/// `breakpoints` lists points in one period where the function (kinks) or its
/// value (discontinuous) is not smooth; quadrature panels are cut there.
struct PeriodicFunction {
    std::function<double(double)> evaluator;
    double a0 = 0.0;
    Smoothness smoothness = Smoothness::Smooth;
    std::vector<double> breakpoints;

    double operator()(double t) const { return 0.5 * a0 + evaluator(t); }

    static PeriodicFunction smooth(std::function<double(double)> fn, double a0 = 0.0) {
        return {std::move(fn), a0, Smoothness::Smooth, {}};
    }
};

/// Pointwise c * f.
PeriodicFunction scaled(const PeriodicFunction& f, double c);

struct QuadratureSpec {
    int panels = 64;
    int nodes_per_panel = 24;
    std::vector<double> breakpoints;
};

struct NormEstimate {
    double value;
    double error; ///< |difference| against the run with doubled panels
};

/// p' from 1/p + 1/p' = 1, with 1 <-> infinity.
double conjugate_exponent(double p);

/// ||cos t||_{p'} over one period; the p' = infinity value is 1.
double cos_pnorm(double p_prime);

/// (int_{-pi}^{pi} |f|^p)^{1/p}; p = infinity is routed to sup_norm.
double lp_norm(const PeriodicFunction& f, double p, const QuadratureSpec& quad = {});
NormEstimate lp_norm_estimate(const PeriodicFunction& f, double p, const QuadratureSpec& quad = {});

/// int over one period, on panels cut at quad and f breakpoints.
double integrate_period(const PeriodicFunction& f, const QuadratureSpec& quad = {});

/// max |f| from a uniform grid of `grid_size` points plus local refinement
/// of every grid maximum.
double sup_norm(const PeriodicFunction& f, int grid_size = 4096);

/// Brent maximisation of g on [a, b]; returns (argmax, max).
std::pair<double, double> refine_maximum(const std::function<double(double)>& g, double a, double b,
                                         double xtol = 1e-13);

} // namespace convapprox
