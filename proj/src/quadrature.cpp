#include "convapprox/quadrature.hpp"

#include <algorithm>

namespace convapprox {

std::vector<Panel> periodic_panels(int uniform, const std::vector<double>& breakpoints, double start) {
    if (uniform < 1) throw std::invalid_argument("need at least one panel");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double merge_tol = 1e-13;

    struct Cut {
        double x;
        bool singular;
    };
    std::vector<Cut> cuts;
    cuts.reserve(static_cast<std::size_t>(uniform) + breakpoints.size() + 1);
    for (int i = 0; i < uniform; ++i) cuts.push_back({two_pi * i / uniform, false});
    for (double bp : breakpoints) {
        double x = std::fmod(bp - start, two_pi);
        if (x < 0) x += two_pi;
        if (x > two_pi - merge_tol) x = 0.0;
        cuts.push_back({x, true});
    }
    std::sort(cuts.begin(), cuts.end(), [](const Cut& l, const Cut& r) { return l.x < r.x; });

    std::vector<Cut> merged;
    for (const auto& c : cuts) {
        if (!merged.empty() && c.x - merged.back().x <= merge_tol) {
            merged.back().singular = merged.back().singular || c.singular;
            continue;
        }
        merged.push_back(c);
    }

    std::vector<Panel> panels;
    panels.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const Cut& lo = merged[i];
        const bool last = i + 1 == merged.size();
        const double hi_x = last ? two_pi : merged[i + 1].x;
        const bool hi_sing = last ? merged.front().singular : merged[i + 1].singular;
        panels.push_back({start + lo.x, start + hi_x, lo.singular, hi_sing});
    }
    return panels;
}

std::vector<QuadratureNode> panel_nodes(const std::vector<Panel>& panels, const GaussLegendreRule<double>& rule,
                                        int grading_levels) {
    constexpr double sigma = 0.15;
    std::vector<QuadratureNode> out;
    auto plain = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
            out.push_back({mid + half * rule.nodes(i), half * rule.weights(i)});
    };
    // geometric subpanels shrinking toward `inner`
    auto graded = [&](double inner, double outer) {
        double len = outer - inner;
        for (int level = 0; level < grading_levels; ++level) {
            const double cut = inner + len * sigma;
            if (cut < outer)
                plain(cut, outer);
            else
                plain(outer, cut);
            outer = cut;
            len *= sigma;
        }
        if (inner < outer)
            plain(inner, outer);
        else
            plain(outer, inner);
    };
    for (const auto& p : panels) {
        if (grading_levels <= 0 || (!p.singular_left && !p.singular_right)) {
            plain(p.a, p.b);
            continue;
        }
        // split in the middle so each half has at most one singular end
        const double m = 0.5 * (p.a + p.b);
        if (p.singular_left)
            graded(p.a, m);
        else
            plain(p.a, m);
        if (p.singular_right)
            graded(p.b, m);
        else
            plain(m, p.b);
    }
    return out;
}

} // namespace convapprox
