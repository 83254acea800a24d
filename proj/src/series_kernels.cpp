#include "convapprox/series_kernels.hpp"

#include "convapprox/errors.hpp"
#include "convapprox/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace convapprox {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Upper bound on Gamma(s, x) = int_x^inf u^{s-1} e^{-u} du.
double upper_gamma_bound(double s, double x) {
    if (x <= 0.0) return std::tgamma(s);
    if (s <= 1.0) return std::exp((s - 1.0) * std::log(x) - x);
    if (x > s - 1.0) return std::exp((s - 1.0) * std::log(x) - x) * x / (x - (s - 1.0));
    return std::tgamma(s);
}

// int_K^inf exp(-alpha t^r) dt, bounded above.
double exp_power_integral_bound(double alpha, double r, double K) {
    const double s = 1.0 / r;
    const double x = alpha * std::pow(K, r);
    return upper_gamma_bound(s, x) / (r * std::pow(alpha, s));
}

constexpr long kMaxTruncation = 10'000'000;

// Tails are also resolved relative to their leading term so that tiny tails keep their digits.
constexpr double kRelativeTailTol = 1e-14;

} // namespace

PsiSequence PsiSequence::power_law(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("power law exponent r must be positive");
    return PsiSequence(PowerLaw{r});
}

PsiSequence PsiSequence::exp_power(double alpha, double r) {
    if (!(alpha > 0.0) || !(r > 0.0) || !std::isfinite(alpha) || !std::isfinite(r))
        throw DomainError("exp-power parameters alpha and r must be positive");
    return PsiSequence(ExpPower{alpha, r});
}

PsiSequence PsiSequence::table(std::vector<double> values) {
    if (values.empty()) throw DomainError("psi table must not be empty");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("psi table entries must be finite and nonnegative");
    return PsiSequence(Table{std::move(values)});
}

double PsiSequence::operator()(long k) const {
    if (k < 1) throw DomainError("psi(k) is defined for k >= 1, got k = " + std::to_string(k));
    const auto kd = static_cast<double>(k);
    return std::visit(overloaded{
                          [&](const PowerLaw& p) { return std::pow(kd, -p.r); },
                          [&](const ExpPower& e) { return std::exp(-e.alpha * std::pow(kd, e.r)); },
                          [&](const Table& t) {
                              return static_cast<std::size_t>(k) <= t.values.size() ? t.values[k - 1] : 0.0;
                          },
                      },
                      family_);
}

bool PsiSequence::is_summable() const noexcept {
    if (const auto* p = std::get_if<PowerLaw>(&family_)) return p->r > 1.0;
    return true;
}

std::string PsiSequence::describe() const {
    return std::visit(overloaded{
                          [](const PowerLaw& p) { return "power:r=" + shortest(p.r); },
                          [](const ExpPower& e) { return "exp:alpha=" + shortest(e.alpha) + ",r=" + shortest(e.r); },
                          [](const Table& t) {
                              std::string s = "table:";
                              for (std::size_t i = 0; i < t.values.size(); ++i) {
                                  if (i) s += ',';
                                  s += shortest(t.values[i]);
                              }
                              return s;
                          },
                      },
                      family_);
}

BetaSequence BetaSequence::constant(double beta) {
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
    return BetaSequence({beta}, true);
}

BetaSequence BetaSequence::list(std::vector<double> values) {
    if (values.empty()) throw DomainError("beta list must not be empty");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("beta entries must be finite");
    return BetaSequence(std::move(values), false);
}

double BetaSequence::operator()(long k) const {
    if (k < 1) throw DomainError("beta_k is defined for k >= 1");
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(k - 1), values_.size() - 1);
    return values_[i];
}

std::string BetaSequence::describe() const {
    if (constant_) return "const:" + shortest(values_.front());
    std::string s = "list:";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ',';
        s += shortest(values_[i]);
    }
    return s;
}

double psi_value(const PsiSequence& psi, long k) { return psi(k); }

double tail_upper_bound(const PsiSequence& psi, long n) {
    if (n < 0) throw DomainError("tail index must be nonnegative");
    const auto nd = static_cast<double>(n);
    return std::visit(
        overloaded{
            [&](const PowerLaw& p) {
                if (p.r <= 1.0) return std::numeric_limits<double>::infinity();
                // convexity: sum_{k>n} k^{-r} <= int_{n+1/2}^inf t^{-r} dt
                return std::pow(nd + 0.5, 1.0 - p.r) / (p.r - 1.0);
            },
            [&](const ExpPower& e) {
                double bound = exp_power_integral_bound(e.alpha, e.r, nd);
                if (e.r >= 1.0) {
                    // consecutive ratios decrease, so the tail is dominated by a geometric series
                    const double t1 = psi(n + 1);
                    const double q = std::exp(-e.alpha * (std::pow(nd + 2.0, e.r) - std::pow(nd + 1.0, e.r)));
                    if (q < 1.0) bound = std::min(bound, t1 / (1.0 - q));
                }
                return bound;
            },
            [&](const Table& t) {
                double s = 0.0;
                for (std::size_t k = t.values.size(); k > static_cast<std::size_t>(n); --k) s += t.values[k - 1];
                return s;
            },
        },
        psi.family());
}

TailEstimate psi_tail_estimate(const PsiSequence& psi, long n, double eps) {
    if (n < 0) throw DomainError("tail index must be nonnegative");
    if (!(eps > 0.0)) throw DomainError("tail tolerance must be positive");
    const auto nd = static_cast<double>(n);

    if (const auto* t = std::get_if<Table>(&psi.family())) {
        CompensatedSum s;
        long terms = 0;
        for (std::size_t k = t->values.size(); k > static_cast<std::size_t>(n); --k, ++terms) s.add(t->values[k - 1]);
        return {s.value(), s.value(), s.value(), 0.0, terms};
    }

    if (const auto* p = std::get_if<PowerLaw>(&psi.family())) {
        if (p->r <= 1.0) throw DivergentTailError("sum of k^{-r} diverges for r <= 1 (r = " + shortest(p->r) + ")");
        const double r = p->r;
        const double target = std::min(eps, kRelativeTailTol * psi(n + 1));
        // Euler-Maclaurin midpoint remainder is within r (K+1/2)^{-r-1} / 24 of the true remainder.
        const double cap = std::max(1.0e6, 100.0 * nd);
        double K = std::ceil(std::pow(r / (6.0 * target), 1.0 / (r + 1.0)));
        // K >= 2(r + 1) keeps the second-derivative term of the remainder below |f'|/2
        K = std::clamp(std::max(K, std::ceil(2.0 * (r + 1.0))), nd, std::max(cap, nd));
        const auto k_end = static_cast<long>(K);

        // summing smallest terms first keeps the partial sum accurate
        CompensatedSum s;
        for (long k = k_end; k > n; --k) s.add(std::pow(static_cast<double>(k), -r));
        const double partial = s.value();

        const double mid = K + 0.5;
        const double rem_mid = std::pow(mid, 1.0 - r) / (r - 1.0);
        const double rem_corr = r * std::pow(mid, -r - 1.0) / 24.0;
        const double rem_low = std::pow(K + 1.0, 1.0 - r) / (r - 1.0);
        const double rem_err = rem_corr * (1.0 + (r + 1.0) / mid);
        const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * (partial + rem_mid);
        return {partial + rem_mid - rem_corr, partial + rem_low, partial + rem_mid, rem_err + rounding,
                k_end - n};
    }

    const auto& e = std::get<ExpPower>(psi.family());
    CompensatedSum s;
    long k = n + 1;
    long terms = 0;
    const double target = std::min(eps, kRelativeTailTol * psi(n + 1));
    double rem = tail_upper_bound(psi, n);
    while (rem > 0.5 * target && k < n + kMaxTruncation) {
        const double term = std::exp(-e.alpha * std::pow(static_cast<double>(k), e.r));
        if (term == 0.0) {
            rem = 0.0;
            break;
        }
        s.add(term);
        ++terms;
        rem = tail_upper_bound(psi, k);
        ++k;
    }
    const double value = s.value();
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * value;
    return {value + 0.5 * rem, value, value + rem, 0.5 * rem + rounding, terms};
}

double psi_tail(const PsiSequence& psi, long n, double eps) { return psi_tail_estimate(psi, n, eps).value; }

long truncation_index(const PsiSequence& psi, double eps) {
    if (!(eps > 0.0)) throw DomainError("tail tolerance must be positive");
    if (const auto* t = std::get_if<Table>(&psi.family())) return static_cast<long>(t->values.size());
    if (!psi.is_summable()) throw DivergentTailError("kernel coefficients are not summable (power law with r <= 1)");

    long hi = 1;
    while (tail_upper_bound(psi, hi) > eps) {
        if (hi >= kMaxTruncation)
            throw ConfigurationError("tail tolerance " + shortest(eps) + " needs more than " +
                                     std::to_string(kMaxTruncation) + " terms for " + psi.describe());
        hi *= 2;
    }
    long lo = hi / 2;
    if (tail_upper_bound(psi, lo) <= eps) return lo;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (tail_upper_bound(psi, mid) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::string condition_tag(Condition c) {
    switch (c) {
    case Condition::TailBelowLead: return "tail_below_lead";
    case Condition::RatioToZero: return "ratio_to_zero";
    case Condition::PowerLawGrowth: return "power_growth";
    case Condition::ExpTailFactor: return "exp_tail_factor";
    }
    return "?";
}

Condition parse_condition_tag(const std::string& tag) {
    if (tag == "tail_below_lead") return Condition::TailBelowLead;
    if (tag == "ratio_to_zero") return Condition::RatioToZero;
    if (tag == "power_growth") return Condition::PowerLawGrowth;
    if (tag == "exp_tail_factor") return Condition::ExpTailFactor;
    throw ConfigurationError("unknown condition tag '" + tag + "'");
}

HypothesisResult hypothesis_check(const PsiSequence& psi, long n, Condition which) {
    if (n < 1) throw DomainError("n must be >= 1");
    const auto nd = static_cast<double>(n);
    switch (which) {
    case Condition::TailBelowLead: {
        if (!psi.is_summable()) return {which, false, std::numeric_limits<double>::infinity(), psi(n), "divergent tail"};
        const auto tail = psi_tail_estimate(psi, n);
        const double lead = psi(n);
        // decided on the enclosure, not on the point estimate
        return {which, tail.upper < lead, tail.value, lead, "sum_{k>n} psi(k) < psi(n)"};
    }
    case Condition::RatioToZero: {
        const double a = psi(n);
        const double ratio = a > 0.0 ? psi(n + 1) / a : 0.0;
        bool limit_zero = std::visit(overloaded{
                                         [](const PowerLaw&) { return false; },
                                         [](const ExpPower& e) { return e.r > 1.0; },
                                         [](const Table&) { return true; },
                                     },
                                     psi.family());
        return {which, limit_zero, ratio, 0.0, "ratio psi(n+1)/psi(n) at n; holds refers to the limit k -> inf"};
    }
    case Condition::PowerLawGrowth: {
        const auto* p = std::get_if<PowerLaw>(&psi.family());
        if (!p) throw ConfigurationError("the power-law growth condition needs a power-law sequence, got " + psi.describe());
        const double lhs = std::pow(1.0 + 1.0 / nd, -p->r);
        const double rhs = 1.0 / (2.0 + 1.0 / nd);
        return {which, lhs < rhs, lhs, rhs, p->r >= nd + 1.0 ? "r >= n+1" : "r < n+1"};
    }
    case Condition::ExpTailFactor: {
        const auto* e = std::get_if<ExpPower>(&psi.family());
        if (!e) throw ConfigurationError("the exponential tail condition needs an exp-power sequence, got " + psi.describe());
        if (!(e->r > 1.0)) throw ConfigurationError("the exponential tail condition requires r > 1");
        const double x = e->alpha * e->r * std::pow(nd, e->r - 1.0);
        const double lhs = (1.0 + 1.0 / x) * std::exp(-x);
        return {which, lhs < 1.0, lhs, 1.0, ""};
    }
    }
    throw ConfigurationError("unknown condition");
}

double kernel_eval(const KernelSpec& spec, double t) {
    const long N = truncation_index(spec.psi, spec.tail_eps);
    CompensatedSum s;
    for (long k = 1; k <= N; ++k) {
        const double a = spec.psi(k);
        if (a == 0.0) continue;
        s.add(a * std::cos(static_cast<double>(k) * t - spec.beta(k) * std::numbers::pi / 2.0));
    }
    return s.value();
}

std::vector<std::pair<double, double>> kernel_coefficients(const KernelSpec& spec, long k_max) {
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) out.emplace_back(spec.psi(k), spec.beta(k) * std::numbers::pi / 2.0);
    return out;
}

} // namespace convapprox
