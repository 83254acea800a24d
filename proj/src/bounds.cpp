#include "convapprox/bounds.hpp"

#include "convapprox/best_approx.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/extremal.hpp"
#include "convapprox/format.hpp"
#include "convapprox/norms.hpp"

#include <cmath>
#include <numbers>

namespace convapprox {

namespace {

constexpr double kPi = std::numbers::pi;

double bound_constant(double p) {
    if (!(p >= 1.0)) throw DomainError("p must be >= 1");
    return cos_pnorm(conjugate_exponent(p)) / kPi;
}

void require_tail_hypothesis(long n, const PsiSequence& psi, double tail) {
    const double lead = psi(n);
    if (!(tail < lead))
        throw HypothesisViolation("tail condition violated: sum_{k>n} psi(k) = " + shortest(tail) +
                                  " >= psi(n) = " + shortest(lead));
}

} // namespace

double lower_bound(long n, double p, const PsiSequence& psi) {
    if (n < 1) throw DomainError("n must be >= 1");
    const double c = bound_constant(p);
    if (!psi.is_summable()) throw HypothesisViolation("tail condition violated: divergent tail");
    const double tail = psi_tail(psi, n);
    require_tail_hypothesis(n, psi, tail);
    return c * (psi(n) - tail);
}

double upper_bound(long n, double p, const PsiSequence& psi) {
    if (n < 1) throw DomainError("n must be >= 1");
    const double c = bound_constant(p);
    if (!psi.is_summable()) throw DivergentTailError("upper bound needs a finite tail sum");
    return c * (psi(n) + psi_tail(psi, n));
}

double spike_lower_bound(long n, const PsiSequence& psi, double delta) {
    if (!(delta > 0.0 && delta < kPi / 2.0)) throw DomainError("delta must lie in (0, pi/2)");
    const double tail = psi_tail(psi, n);
    require_tail_hypothesis(n, psi, tail);
    return (2.0 / delta * std::sin(0.5 * delta) * psi(n) - tail) / kPi;
}

double elliptic_K(double q) {
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("elliptic_K needs 0 <= q < 1");
    double a = 1.0;
    double b = std::sqrt((1.0 - q) * (1.0 + q));
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-15 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (2.0 * a);
}

ReferenceFormula parse_reference_tag(const std::string& tag) {
    if (tag == "K") return ReferenceFormula::Kolmogorov;
    if (tag == "S1") return ReferenceFormula::StechkinElliptic;
    if (tag == "S2") return ReferenceFormula::StechkinHigh;
    if (tag == "Wp") return ReferenceFormula::WeylNagyP;
    throw ConfigurationError("unknown reference formula tag '" + tag + "'");
}

std::string reference_tag(ReferenceFormula f) {
    switch (f) {
    case ReferenceFormula::Kolmogorov: return "K";
    case ReferenceFormula::StechkinElliptic: return "S1";
    case ReferenceFormula::StechkinHigh: return "S2";
    case ReferenceFormula::WeylNagyP: return "Wp";
    }
    return "?";
}

double reference_asymptotics(long n, double r, ReferenceFormula which, double p) {
    if (n < 2) throw DomainError("reference asymptotics need n >= 2");
    if (!(r > 0.0)) throw DomainError("reference asymptotics need r > 0");
    const auto nd = static_cast<double>(n);
    const double scale = std::pow(nd, -r);
    switch (which) {
    case ReferenceFormula::Kolmogorov: return 4.0 / kPi * std::log(nd) * scale;
    case ReferenceFormula::StechkinElliptic:
        if (r < 1.0) throw DomainError("elliptic reference formula needs r >= 1");
        return 8.0 / (kPi * kPi) * elliptic_K(std::exp(-r / nd)) * scale;
    case ReferenceFormula::StechkinHigh: return 4.0 / kPi * scale;
    case ReferenceFormula::WeylNagyP: return bound_constant(p) * scale;
    }
    throw ConfigurationError("unknown reference formula");
}

bool BoundsReport::passed() const {
    for (const auto& [name, c] : checks)
        if (!c.holds) return false;
    return true;
}

namespace {

Check less_equal(double lhs, double rhs) { return {lhs <= rhs, lhs, rhs}; }
Check less(double lhs, double rhs) { return {lhs < rhs, lhs, rhs}; }

} // namespace

BoundsReport bounds_report(long n, double p, const PsiSequence& psi, const ReportOptions& opts) {
    if (n < 1) throw DomainError("n must be >= 1");
    BoundsReport rep;
    rep.n = n;
    rep.p = p;
    rep.psi = psi.describe();
    rep.beta = opts.beta.describe();

    const double c = bound_constant(p);
    const auto tail_ok = hypothesis_check(psi, n, Condition::TailBelowLead);
    rep.hypothesis[condition_tag(Condition::TailBelowLead)] = tail_ok.holds;
    const auto d0 = hypothesis_check(psi, n, Condition::RatioToZero);
    rep.hypothesis[condition_tag(Condition::RatioToZero)] = d0.holds;
    rep.ratios["psi_ratio"] = d0.lhs;
    if (!tail_ok.holds) throw HypothesisViolation("tail condition violated");

    rep.psi_n = psi(n);
    rep.tail = psi_tail(psi, n);
    rep.lower = lower_bound(n, p, psi);
    rep.upper = upper_bound(n, p, psi);
    rep.ratios["tau"] = rep.tail / rep.psi_n;
    const double gap = rep.upper - rep.lower;
    rep.checks["bound_gap"] = {std::abs(gap - 2.0 * c * rep.tail) <= 1e-14 * rep.upper, gap, 2.0 * c * rep.tail};

    if (opts.compute_witness) {
        WitnessSpec spec{n, p, psi, opts.beta, std::nullopt};
        const auto w = build_witness(spec);
        RemezOptions ro;
        ro.tol = opts.remez_tol;
        ro.max_iter = opts.remez_max_iter;
        const auto rz = remez_trig(w, ro);
        rep.witness_value = rz.value;
        rep.witness_leveled = rz.leveled_error;
        rep.witness_certified = rz.certified;
        rep.remez_iterations = rz.iterations;
        rep.witness_vp_lower = vallee_poussin_lower(w);

        // the lower bound of a p = 1 class is approached by witnesses as delta -> 0
        const double witness_floor = p == 1.0 ? spike_lower_bound(n, psi, w.delta) : rep.lower;
        rep.reference["witness_floor"] = witness_floor;
        rep.checks["certified"] = {rz.certified, rz.value - rz.leveled_error, ro.tol * rz.value};
        rep.checks["alternation"] = less_equal(witness_floor, *rep.witness_vp_lower);
        rep.checks["sandwich_lower"] = less_equal(witness_floor, rz.leveled_error);
        rep.checks["sandwich_upper"] = less_equal(rz.value, rep.upper);
        rep.checks["vp_below_best"] = less_equal(*rep.witness_vp_lower, rz.value * (1.0 + 1e-12));

        const double ratio = rz.value / (c * rep.psi_n);
        rep.ratios["witness_ratio"] = ratio;
        rep.ratios["residual"] = rep.tail > 0.0 ? (rz.value - c * rep.psi_n) / (c * rep.tail) : 0.0;
        if (p != 1.0) rep.checks["ratio_within_tau"] = less_equal(std::abs(ratio - 1.0), rep.ratios["tau"]);
    }
    return rep;
}

BoundsReport weyl_nagy_report(long n, double r, double p, const ReportOptions& opts) {
    if (n < 1) throw DomainError("n must be >= 1");
    const auto nd = static_cast<double>(n);
    if (!(r >= nd + 1.0)) throw HypothesisViolation("Weyl-Nagy bracket needs r >= n + 1");
    const auto psi = PsiSequence::power_law(r);
    const auto growth = hypothesis_check(psi, n, Condition::PowerLawGrowth);
    if (!growth.holds) throw HypothesisViolation("power-law growth condition violated");

    BoundsReport rep = bounds_report(n, p, psi, opts);
    rep.hypothesis[condition_tag(Condition::PowerLawGrowth)] = true;

    const double c = bound_constant(p);
    const double factor = (2.0 + 1.0 / nd) * std::pow(1.0 + 1.0 / nd, -r);
    const double lead = std::pow(nd, -r);
    rep.ratios["bracket_factor"] = factor;
    rep.reference["power_bracket_lower"] = c * lead * (1.0 - factor);
    rep.reference["power_bracket_upper"] = c * lead * (1.0 + factor);
    rep.reference["tail_bound"] = lead * factor;
    rep.reference["S2"] = n >= 2 ? reference_asymptotics(n, r, ReferenceFormula::StechkinHigh) : 4.0 / kPi * lead;
    rep.reference["Wp"] = c * lead;
    rep.checks["tail_below_bound"] = less(rep.tail, lead * factor);
    rep.checks["power_bracket_below_lower"] = less_equal(rep.reference["power_bracket_lower"], rep.lower);
    rep.checks["power_bracket_above_upper"] = less_equal(rep.upper, rep.reference["power_bracket_upper"]);
    if (rep.witness_value)
        rep.ratios["residual_high"] = (*rep.witness_value - c * lead) / (lead * std::pow(1.0 + 1.0 / nd, -r));
    return rep;
}

BoundsReport exp_class_report(long n, double alpha, double r, double p, const ReportOptions& opts) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(r > 1.0)) throw HypothesisViolation("exponential bracket needs r > 1");
    const auto psi = PsiSequence::exp_power(alpha, r);
    const auto h = hypothesis_check(psi, n, Condition::ExpTailFactor);
    if (!h.holds) throw HypothesisViolation("exponential tail condition violated");

    BoundsReport rep = bounds_report(n, p, psi, opts);
    rep.hypothesis[condition_tag(Condition::ExpTailFactor)] = true;

    const auto nd = static_cast<double>(n);
    const double c = bound_constant(p);
    const double lead = std::exp(-alpha * std::pow(nd, r));
    const double factor = h.lhs; // (1 + 1/(alpha r n^{r-1})) e^{-alpha r n^{r-1}}
    rep.ratios["bracket_factor"] = factor;
    rep.reference["exp_bracket_lower"] = c * lead * (1.0 - factor);
    rep.reference["exp_bracket_upper"] = c * lead * (1.0 + factor);
    rep.reference["tail_bound"] = lead * factor;
    rep.checks["tail_below_bound"] = less(rep.tail, lead * factor);
    rep.checks["exp_bracket_below_lower"] = less_equal(rep.reference["exp_bracket_lower"], rep.lower);
    rep.checks["exp_bracket_above_upper"] = less_equal(rep.upper, rep.reference["exp_bracket_upper"]);
    if (rep.witness_value) rep.ratios["residual_exp"] = (*rep.witness_value - c * lead) / (lead * factor);
    return rep;
}

} // namespace convapprox
