#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace convapprox {

/// psi(k) = k^{-r}
struct PowerLaw {
    double r;
};

/// psi(k) = exp(-alpha k^r)
struct ExpPower {
    double alpha;
    double r;
};

/// psi(k) = values[k-1] for k <= values.size(), zero afterwards.
struct Table {
    std::vector<double> values;
};

/// Nonnegative coefficient sequence psi(1), psi(2), ... of a generating kernel.
///
/// Power-law and exponential-power sequences are strictly decreasing; tables are
/// finitely supported and arbitrary otherwise.
class PsiSequence {
public:
    using Family = std::variant<PowerLaw, ExpPower, Table>;

    static PsiSequence power_law(double r);
    static PsiSequence exp_power(double alpha, double r);
    static PsiSequence table(std::vector<double> values);

    const Family& family() const noexcept { return family_; }

    double operator()(long k) const;

    /// True for families whose values decrease in k.
    bool is_decreasing() const noexcept { return !std::holds_alternative<Table>(family_); }

    /// Finite sum_{k>=1} psi(k). Power law needs r > 1.
    bool is_summable() const noexcept;

    /// Compact, parseable description, e.g. "power:r=5".
    std::string describe() const;

private:
    explicit PsiSequence(Family f) : family_(std::move(f)) {}
    Family family_;
};

/// Phase sequence beta_1, beta_2, ...; a list repeats its last entry.
class BetaSequence {
public:
    static BetaSequence constant(double beta);
    static BetaSequence list(std::vector<double> values);

    double operator()(long k) const;
    bool is_constant() const noexcept { return values_.size() == 1 && constant_; }
    std::string describe() const;

private:
    BetaSequence(std::vector<double> v, bool constant) : values_(std::move(v)), constant_(constant) {}
    std::vector<double> values_;
    bool constant_;
};

struct KernelSpec {
    PsiSequence psi;
    BetaSequence beta = BetaSequence::constant(0.0);
    double tail_eps = 1e-12;
};

/// Tail sum with an enclosure. `lower <= true tail <= upper` and
/// |value - true tail| <= error_bound.
struct TailEstimate {
    double value;
    double lower;
    double upper;
    double error_bound;
    long terms_summed;
};

double psi_value(const PsiSequence& psi, long k);

/// sum_{k=n+1}^infty psi(k) with absolute error <= eps.
double psi_tail(const PsiSequence& psi, long n, double eps = 1e-12);
TailEstimate psi_tail_estimate(const PsiSequence& psi, long n, double eps = 1e-12);

/// Cheap closed-form upper bound on sum_{k>n} psi(k); never below the true tail.
double tail_upper_bound(const PsiSequence& psi, long n);

/// Smallest N (up to the rigour of tail_upper_bound) with sum_{k>N} psi(k) <= eps.
long truncation_index(const PsiSequence& psi, double eps);

enum class Condition {
    TailBelowLead,  ///< sum_{k>n} psi(k) < psi(n)
    RatioToZero,    ///< D_0: psi(k+1)/psi(k) -> 0
    PowerLawGrowth, ///< (1 + 1/n)^{-r} < (2 + 1/n)^{-1}
    ExpTailFactor,  ///< (1 + 1/(alpha r n^{r-1})) e^{-alpha r n^{r-1}} < 1
};

/// Short tag used in reports: "tail_below_lead", "ratio_to_zero", "power_growth", "exp_tail_factor".
std::string condition_tag(Condition c);
Condition parse_condition_tag(const std::string& tag);

struct HypothesisResult {
    Condition condition;
    bool holds;
    double lhs;
    double rhs;
    std::string note;
};

HypothesisResult hypothesis_check(const PsiSequence& psi, long n, Condition which);

double kernel_eval(const KernelSpec& spec, double t);

/// (psi(k), beta_k pi / 2) for k = 1..k_max.
std::vector<std::pair<double, double>> kernel_coefficients(const KernelSpec& spec, long k_max);

} // namespace convapprox
