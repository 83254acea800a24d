#include "convapprox/norms.hpp"

#include "convapprox/errors.hpp"
#include "convapprox/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace convapprox {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> merged_breakpoints(const PeriodicFunction& f, const QuadratureSpec& quad) {
    std::vector<double> bps = quad.breakpoints;
    if (f.smoothness != Smoothness::Smooth) bps.insert(bps.end(), f.breakpoints.begin(), f.breakpoints.end());
    return bps;
}

double power_integral(const PeriodicFunction& f, double p, const std::vector<Panel>& panels,
                      const GaussLegendreRule<double>& rule, bool graded) {
    auto integrand = [&](double t) { return std::pow(std::abs(f(t)), p); };
    return integrate_panels(integrand, panels, rule, graded ? 14 : 0);
}

} // namespace

PeriodicFunction scaled(const PeriodicFunction& f, double c) {
    PeriodicFunction g = f;
    g.a0 = c * f.a0;
    g.evaluator = [fn = f.evaluator, c](double t) { return c * fn(t); };
    return g;
}

double conjugate_exponent(double p) {
    if (!(p >= 1.0)) throw DomainError("exponent p must be >= 1");
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInfinity;
    return p / (p - 1.0);
}

double cos_pnorm(double p_prime) {
    if (!(p_prime >= 1.0)) throw DomainError("||cos||_{p'} needs p' >= 1");
    if (std::isinf(p_prime)) return 1.0;
    // int_{-pi}^{pi} |cos t|^q dt = 2 sqrt(pi) Gamma((q+1)/2) / Gamma(q/2 + 1)
    const double log_integral = std::log(2.0) + 0.5 * std::log(std::numbers::pi) +
                                std::lgamma(0.5 * (p_prime + 1.0)) - std::lgamma(0.5 * p_prime + 1.0);
    return std::exp(log_integral / p_prime);
}

double integrate_period(const PeriodicFunction& f, const QuadratureSpec& quad) {
    const auto bps = merged_breakpoints(f, quad);
    const auto panels = periodic_panels(quad.panels, bps);
    const auto rule = gauss_legendre(quad.nodes_per_panel);
    return integrate_panels([&](double t) { return f(t); }, panels, rule, bps.empty() ? 0 : 14);
}

NormEstimate lp_norm_estimate(const PeriodicFunction& f, double p, const QuadratureSpec& quad) {
    if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
    if (std::isinf(p)) return {sup_norm(f), 0.0};
    if (quad.panels < 1 || quad.nodes_per_panel < 1) throw DomainError("quadrature spec needs positive sizes");

    const auto bps = merged_breakpoints(f, quad);
    const auto rule = gauss_legendre(quad.nodes_per_panel);
    const bool graded = !bps.empty();
    const double coarse = power_integral(f, p, periodic_panels(quad.panels, bps), rule, graded);
    const double fine = power_integral(f, p, periodic_panels(2 * quad.panels, bps), rule, graded);
    const double value = std::pow(fine, 1.0 / p);
    const double other = std::pow(coarse, 1.0 / p);
    return {value, std::abs(value - other)};
}

double lp_norm(const PeriodicFunction& f, double p, const QuadratureSpec& quad) {
    return lp_norm_estimate(f, p, quad).value;
}

std::pair<double, double> refine_maximum(const std::function<double(double)>& g, double a, double b, double xtol) {
    // Brent's method on -g
    constexpr double golden = 0.3819660112501051;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = -g(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-15;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m ? b : a) - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = -g(u);
        if (fu <= fx) {
            if (u < x)
                b = x;
            else
                a = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, -fx};
}

double sup_norm(const PeriodicFunction& f, int grid_size) {
    if (grid_size < 4) throw DomainError("sup_norm grid needs at least 4 points");
    const auto M = static_cast<std::size_t>(grid_size);
    const double h = kTwoPi / grid_size;
    std::vector<double> v(M);
    for (std::size_t i = 0; i < M; ++i) v[i] = std::abs(f(h * static_cast<double>(i)));

    double best = *std::max_element(v.begin(), v.end());
    const std::function<double(double)> absf = [&](double t) { return std::abs(f(t)); };
    for (std::size_t i = 0; i < M; ++i) {
        const double left = v[(i + M - 1) % M];
        const double right = v[(i + 1) % M];
        if (v[i] < left || v[i] < right || v[i] == 0.0) continue;
        const double t = h * static_cast<double>(i);
        best = std::max(best, refine_maximum(absf, t - h, t + h).second);
    }
    return best;
}

} // namespace convapprox
