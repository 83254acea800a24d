// Acceptance run: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include "oracles.hpp"

#include "cli/commands.hpp"
#include "convapprox/best_approx.hpp"
#include "convapprox/bounds.hpp"
#include "convapprox/extremal.hpp"
#include "convapprox/norms.hpp"
#include "convapprox/series_kernels.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace convapprox;
using std::numbers::pi;

namespace {

// Spike width for p = 1 witnesses; the p = 1 lower bound is a limit as delta -> 0.
const double kFineDelta = pi / 1024.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

char buf[512];

template <typename... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double norm_const(double p) { return p == 1.0 ? 1.0 : cos_pnorm(conjugate_exponent(p)); }

std::string p_name(double p) { return std::isinf(p) ? "inf" : fmt("%g", p); }

struct WitnessRun {
    ExtremalWitness w;
    RemezResult r;
};

WitnessRun solve(long n, double p, const PsiSequence& psi, double beta) {
    WitnessSpec spec{n, p, psi, BetaSequence::constant(beta), std::nullopt};
    if (p == 1.0) spec.delta = kFineDelta;
    auto w = build_witness(spec);
    auto r = remez_trig(w);
    return {std::move(w), std::move(r)};
}

// Sandwich lower_bound <= E_n <= upper_bound with slack >= 1e-12 on both sides.
void sandwich(Outcome& o, long n, double p, const PsiSequence& psi, double beta, double& min_lo, double& min_hi) {
    const auto run = solve(n, p, psi, beta);
    const double lo = lower_bound(n, p, psi);
    const double hi = upper_bound(n, p, psi);
    const double lo_slack = run.r.leveled_error - lo;
    const double hi_slack = hi - run.r.value;
    min_lo = std::min(min_lo, lo_slack);
    min_hi = std::min(min_hi, hi_slack);
    if (!run.r.certified || lo_slack < 1e-12 || hi_slack < 1e-12) {
        o.pass = false;
        o.detail += fmt(" [n=%ld p=%s beta=%g: lower=%.17g E=[%.17g,%.17g] upper=%.17g certified=%d]", n,
                        p_name(p).c_str(), beta, lo, run.r.leveled_error, run.r.value, hi, run.r.certified);
    }
}

const std::vector<long> kGridN{2, 3, 4, 6, 8};
const std::vector<double> kGridP{1.0, 2.0, std::numeric_limits<double>::infinity()};
const std::vector<double> kGridBeta{0.0, 1.0};

Outcome criterion1() {
    Outcome o;
    double min_lo = kInfinity, min_hi = kInfinity;
    for (long n : kGridN)
        for (double p : kGridP)
            for (double beta : kGridBeta)
                sandwich(o, n, p, PsiSequence::power_law(static_cast<double>(n + 1)), beta, min_lo, min_hi);
    o.detail = fmt("30 points; min(E_leveled - lower)=%.3g, min(upper - E_max)=%.3g", min_lo, min_hi) + o.detail;
    return o;
}

Outcome criterion2() {
    Outcome o;
    double worst = 0.0;
    for (long n : kGridN)
        for (double beta : kGridBeta) {
            const auto psi = PsiSequence::power_law(static_cast<double>(n + 1));
            const auto run = solve(n, 2.0, psi, beta);
            const double exact = psi(n) / std::sqrt(pi);
            const double rel = std::abs(run.r.value - exact) / exact;
            worst = std::max(worst, rel);
            if (!(rel <= 1e-8) || !run.r.certified) o.pass = false;
        }
    o.detail = fmt("10 points; max relative error %.3g (tolerance 1e-8)", worst);
    return o;
}

Outcome criterion3() {
    Outcome o;
    double min_margin = kInfinity;
    for (long n : kGridN)
        for (double p : kGridP)
            for (double beta : kGridBeta) {
                const auto psi = PsiSequence::power_law(static_cast<double>(n + 1));
                WitnessSpec spec{n, p, psi, BetaSequence::constant(beta), std::nullopt};
                if (p == 1.0) spec.delta = kFineDelta;
                const auto w = build_witness(spec);
                double lowest = kInfinity;
                bool signs = true;
                for (std::size_t m = 0; m < w.points.size(); ++m) {
                    const double v = w.f(w.points[m]);
                    signs = signs && oracle::sign(v) == (m % 2 == 0 ? 1.0 : -1.0);
                    lowest = std::min(lowest, std::abs(v));
                }
                const double bound = norm_const(p) / pi * (psi(n) - psi_tail(psi, n));
                min_margin = std::min(min_margin, lowest - bound);
                if (!signs || lowest < bound - 1e-10) {
                    o.pass = false;
                    o.detail += fmt(" [n=%ld p=%s beta=%g signs=%d min|f(x_m)|=%.17g bound=%.17g]", n,
                                    p_name(p).c_str(), beta, signs, lowest, bound);
                }
            }
    o.detail = fmt("30 points; min(min_m|f(x_m)| - bound)=%.3g", min_margin) + o.detail;
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (long n : {2L, 4L, 8L}) {
        const auto nd = static_cast<double>(n);
        const double r = nd + 1.0;
        const auto psi = PsiSequence::power_law(r);
        const bool growth = hypothesis_check(psi, n, Condition::PowerLawGrowth).holds;
        const double tail = psi_tail(psi, n);
        const double tail_bound = std::pow(nd, -r) * std::pow(1.0 + 1.0 / nd, -r) * (2.0 + 1.0 / nd);
        bool inside = true;
        for (double p : kGridP) {
            const double c = norm_const(p) / pi;
            const double factor = (2.0 + 1.0 / nd) / std::pow(1.0 + 1.0 / nd, r);
            const double lo19 = c * std::pow(nd, -r) * (1.0 - factor);
            const double hi19 = c * std::pow(nd, -r) * (1.0 + factor);
            inside = inside && lo19 <= lower_bound(n, p, psi) && upper_bound(n, p, psi) <= hi19;
        }
        const bool ok = growth && tail < tail_bound && inside;
        o.pass = o.pass && ok;
        o.detail += fmt("[n=%ld growth=%d tail=%.6g < %.6g, nested=%d] ", n, growth, tail, tail_bound, inside);
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    double min_lo = kInfinity, min_hi = kInfinity;
    Outcome sw;
    for (long n : {2L, 3L, 4L}) {
        const auto nd = static_cast<double>(n);
        const auto psi = PsiSequence::exp_power(1.0, 2.0);
        const bool h = hypothesis_check(psi, n, Condition::ExpTailFactor).holds;
        double direct = 0.0;
        for (long k = n + 40; k > n; --k) direct += std::exp(-static_cast<double>(k * k));
        const double bound = std::exp(-nd * nd) * (1.0 + 1.0 / (2.0 * nd)) * std::exp(-2.0 * nd);
        const bool ok = h && direct < bound;
        o.pass = o.pass && ok;
        o.detail += fmt("[n=%ld tail_factor=%d tail=%.6g < %.6g] ", n, h, direct, bound);
        for (double p : kGridP)
            for (double beta : kGridBeta) sandwich(sw, n, p, psi, beta, min_lo, min_hi);
    }
    o.pass = o.pass && sw.pass;
    o.detail += fmt("sandwich 18 points: min(E_leveled - lower)=%.3g, min(upper - E_max)=%.3g", min_lo, min_hi) + sw.detail;
    return o;
}

Outcome criterion6() {
    Outcome o;
    double prev_tau = kInfinity;
    for (long n : {2L, 3L, 4L}) {
        const auto nd = static_cast<double>(n);
        const auto psi = PsiSequence::power_law(nd * nd);
        const double tau = psi_tail(psi, n) / psi(n);
        double worst = 0.0;
        for (double p : kGridP) {
            const auto run = solve(n, p, psi, 0.0);
            const double ratio = run.r.value * pi / (norm_const(p) * psi(n));
            worst = std::max(worst, std::abs(ratio - 1.0));
            if (!(std::abs(ratio - 1.0) <= tau) || !run.r.certified) o.pass = false;
        }
        if (!(tau < prev_tau)) o.pass = false;
        prev_tau = tau;
        o.detail += fmt("[n=%ld tau=%.6g max|ratio-1|=%.6g] ", n, tau, worst);
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const bool exact = std::abs(cos_pnorm(1.0) - 4.0) <= 1e-14 && std::abs(cos_pnorm(2.0) - std::sqrt(pi)) <= 1e-14 &&
                       cos_pnorm(kInfinity) == 1.0;
    double worst = 0.0;
    PeriodicFunction c{[](double t) { return std::cos(t); }, 0.0, Smoothness::Kinks, {pi / 2, 3 * pi / 2}};
    for (double q : {1.0, 1.5, 2.0, 3.0, 10.0}) worst = std::max(worst, std::abs(cos_pnorm(q) - lp_norm(c, q)));
    o.pass = exact && worst <= 1e-10;
    o.detail = fmt("special values exact=%d; max |closed form - quadrature| = %.3g (tolerance 1e-10)", exact, worst);
    return o;
}

Outcome criterion8() {
    Outcome o;
    int runs = 0;
    double worst = 0.0;
    auto track = [&](const RemezResult& r, long n) {
        ++runs;
        if (r.certified && r.alternations < 2 * n) o.pass = false;
        if (!r.certified) o.pass = false;
    };
    for (int N : {3, 5}) {
        const auto f = PeriodicFunction::smooth([N](double t) { return std::cos(N * t); });
        for (long n = 1; n <= N; ++n) {
            const auto r = remez_trig(f, n);
            track(r, n);
            worst = std::max(worst, std::abs(r.value - 1.0));
        }
    }
    bool zero = true;
    const auto poly = PeriodicFunction::smooth([](double t) { return 0.3 + 0.2 * std::sin(t) - std::cos(2 * t); });
    for (long n : {3L, 4L}) {
        const auto r = remez_trig(poly, n);
        zero = zero && r.certified && r.value == 0.0;
    }
    const auto g = PeriodicFunction::smooth([](double t) { return std::exp(std::cos(t)) + 0.2 * std::sin(3 * t); });
    double inv = 0.0;
    for (long n : {2L, 3L}) {
        const auto base = remez_trig(g, n);
        track(base, n);
        const auto shifted = PeriodicFunction::smooth([&](double t) { return g(t) + 1.5 - std::cos(t) + 0.7 * std::sin(t); });
        const auto rs = remez_trig(shifted, n);
        track(rs, n);
        inv = std::max(inv, std::abs(rs.value - base.value));
        for (double c : {-3.0, 0.25}) {
            const auto rc = remez_trig(scaled(g, c), n);
            track(rc, n);
            inv = std::max(inv, std::abs(rc.value - std::abs(c) * base.value) / (std::abs(c) * base.value));
        }
    }
    o.pass = o.pass && worst <= 1e-9 && zero && inv <= 1e-9;
    o.detail = fmt("E_n(cos Nt) max dev %.3g; polynomial inputs zero=%d; invariance dev %.3g; %d certified runs "
                   "with >= 2n alternations",
                   worst, zero, inv, runs);
    return o;
}

Outcome criterion9() {
    Outcome o;
    double worst = 0.0;
    for (int i = 0; i <= 9; ++i) {
        const double q = 0.1 * i;
        const double quad =
            oracle::tanh_sinh([q](double t) { return 1.0 / std::sqrt(1.0 - q * q * std::sin(t) * std::sin(t)); }, 0.0,
                              pi / 2);
        worst = std::max(worst, std::abs(elliptic_K(q) - quad));
    }
    const double k0 = std::abs(elliptic_K(0.0) - pi / 2);
    o.pass = worst <= 1e-10 && k0 <= 1e-14;
    o.detail = fmt("max |AGM - quadrature| = %.3g (tolerance 1e-10); |K(0) - pi/2| = %.3g", worst, k0);
    return o;
}

Outcome criterion10() {
    Outcome o;
    for (long n : {2L, 4L}) {
        const auto psi = PsiSequence::power_law(static_cast<double>(n + 1));
        const double limit = (psi(n) - psi_tail(psi, n)) / pi;
        double prev = -kInfinity, last = 0.0;
        bool monotone = true;
        for (int j = 3; j <= 10; ++j) {
            const double b = spike_lower_bound(n, psi, pi / std::ldexp(1.0, j));
            monotone = monotone && b > prev;
            prev = last = b;
        }
        const double rel = std::abs(last - limit) / limit;
        o.pass = o.pass && monotone && rel <= 1e-3;
        o.detail += fmt("[n=%ld monotone=%d rel gap at j=10: %.3g] ", n, monotone, rel);
    }
    return o;
}

Outcome criterion11() {
    Outcome o;
    auto sweep = [](const std::string& jobs, int& code) {
        std::ostringstream out, err;
        code = cli::run({"sweep", "--psi", "power:r=n+1", "--psi", "exp:alpha=1,r=2", "--n", "2,3,4,6,8", "--p",
                         "1,2,inf", "--beta", "const:1", "--format", "csv", "--jobs", jobs},
                        out, err);
        return out.str();
    };
    int c1 = -1, c8 = -1;
    const auto a = sweep("1", c1);
    const auto b = sweep("8", c8);
    o.pass = c1 == 0 && c8 == 0 && !a.empty() && a == b;
    o.detail = fmt("exit codes %d/%d; %zu bytes; identical=%d", c1, c8, a.size(), a == b);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sandwich lower <= E_n <= upper", criterion1},
        {"exact p = 2 witness value", criterion2},
        {"alternation certificate", criterion3},
        {"Weyl-Nagy bracket", criterion4},
        {"exponential class bracket", criterion5},
        {"asymptotic ratio within tau", criterion6},
        {"norm identities", criterion7},
        {"Remez solver suite", criterion8},
        {"elliptic integral", criterion9},
        {"p = 1 limit", criterion10},
        {"sweep determinism", criterion11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << o.detail
                  << "\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
