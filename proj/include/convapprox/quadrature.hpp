#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace convapprox {

template <typename Scalar>
struct GaussLegendreRule {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes;   // on [-1, 1], ascending
    Eigen::Array<Scalar, Eigen::Dynamic, 1> weights;
};

/// Gauss-Legendre rule with `order` nodes (Newton iteration on P_order).
template <typename Scalar = double>
GaussLegendreRule<Scalar> gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    GaussLegendreRule<Scalar> rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(order) + Scalar(0.5)));
        Scalar dp = 0;
        for (int it = 0; it < 100; ++it) {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p0 = 1;
            dp = order * (x * p1 - p0) / (x * x - 1);
            const Scalar dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
        }
        // recompute derivative at the converged node
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= order; ++k) {
            const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order == 1 ? Scalar(1) : order * (x * p1 - p0) / (x * x - 1);
        const Scalar w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(order - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(order - 1 - i) = w;
    }
    if (order % 2 == 1) rule.nodes(order / 2) = 0;
    return rule;
}

/// One integration panel; graded panels are split geometrically toward their
/// flagged endpoints, where the integrand may have an algebraic singularity.
struct Panel {
    double a;
    double b;
    bool singular_left = false;
    bool singular_right = false;
};

/// Panels covering [start, start + 2 pi): `uniform` equal pieces, further cut at every
/// breakpoint (reduced mod 2 pi). Panel ends that sit on a breakpoint are flagged singular.
std::vector<Panel> periodic_panels(int uniform, const std::vector<double>& breakpoints, double start = 0.0);

struct QuadratureNode {
    double x;
    double w;
};

/// Nodes and weights of composite Gauss-Legendre over the panels. Flagged ends are
/// refined with `grading_levels` geometric subpanels of ratio 0.15.
std::vector<QuadratureNode> panel_nodes(const std::vector<Panel>& panels, const GaussLegendreRule<double>& rule,
                                        int grading_levels = 14);

template <typename F>
double integrate_panels(F&& g, const std::vector<Panel>& panels, const GaussLegendreRule<double>& rule,
                        int grading_levels = 14) {
    double total = 0.0;
    for (const auto& node : panel_nodes(panels, rule, grading_levels)) total += node.w * g(node.x);
    return total;
}

} // namespace convapprox
