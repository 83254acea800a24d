#pragma once

#include "convapprox/series_kernels.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>

namespace convapprox {

/// (||cos||_{p'} / pi)(psi(n) - sum_{k>n} psi(k)); p = 1 uses the constant 1/pi.
/// Refuses (HypothesisViolation) unless the tail is below psi(n).
double lower_bound(long n, double p, const PsiSequence& psi);

/// (||cos||_{p'} / pi) sum_{k>=n} psi(k); bounds the Fourier-sum deviation and hence E_n.
double upper_bound(long n, double p, const PsiSequence& psi);

/// p = 1 lower bound at a finite spike width:
/// (1/pi)((2/delta) sin(delta/2) psi(n) - sum_{k>n} psi(k)).
double spike_lower_bound(long n, const PsiSequence& psi, double delta);

/// Complete elliptic integral of the first kind K(q) = int_0^{pi/2} dt / sqrt(1 - q^2 sin^2 t).
double elliptic_K(double q);

enum class ReferenceFormula {
    Kolmogorov,      ///< K:  (4/pi) ln n / n^r
    StechkinElliptic,///< S1: (8/pi^2) K(e^{-r/n}) / n^r, r >= 1
    StechkinHigh,    ///< S2: (4/pi) / n^r
    WeylNagyP,       ///< Wp: (||cos||_{p'} / pi) / n^r
};

ReferenceFormula parse_reference_tag(const std::string& tag);
std::string reference_tag(ReferenceFormula f);

/// Leading term of the named reference asymptotic; remainders are not evaluated.
double reference_asymptotics(long n, double r, ReferenceFormula which, double p = std::numeric_limits<double>::infinity());

struct ReportOptions {
    BetaSequence beta = BetaSequence::constant(0.0);
    bool compute_witness = true;
    double remez_tol = 1e-10;
    int remez_max_iter = 50;
};

/// An asserted inequality lhs <= rhs and whether it held.
struct Check {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// One evaluated parameter point. Values are only present when computed; every
/// present value is finite.
struct BoundsReport {
    long n = 0;
    double p = 0.0;
    std::string psi;
    std::string beta;

    std::map<std::string, bool> hypothesis;  ///< condition tag -> holds
    double lower = 0.0;
    double upper = 0.0;
    double tail = 0.0;
    double psi_n = 0.0;

    std::optional<double> witness_value;     ///< certified max |f - T*| of the witness
    std::optional<double> witness_leveled;   ///< leveled error |h|, a lower bound for E_n
    std::optional<double> witness_vp_lower;  ///< min_m |f(x_m)|
    bool witness_certified = false;
    int remez_iterations = 0;

    std::map<std::string, double> ratios;    ///< diagnostics such as witness_ratio and tau
    std::map<std::string, double> reference; ///< theorem-specific and reference-formula terms
    std::map<std::string, Check> checks;     ///< asserted inequalities

    /// True when every entry of `checks` holds.
    bool passed() const;
};

BoundsReport bounds_report(long n, double p, const PsiSequence& psi, const ReportOptions& opts = {});

/// psi(k) = k^{-r}; needs r >= n + 1 and the power-law growth condition.
BoundsReport weyl_nagy_report(long n, double r, double p, const ReportOptions& opts = {});

/// psi(k) = exp(-alpha k^r); needs r > 1, alpha > 0 and the exponential tail condition.
BoundsReport exp_class_report(long n, double alpha, double r, double p, const ReportOptions& opts = {});

} // namespace convapprox
