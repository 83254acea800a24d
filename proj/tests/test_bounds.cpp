#include "doctest.h"
#include "oracles.hpp"

#include "convapprox/bounds.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/norms.hpp"

#include <cmath>
#include <numbers>

using namespace convapprox;
using std::numbers::pi;

namespace {

double elliptic_oracle(double q) {
    return oracle::tanh_sinh([q](double t) { return 1.0 / std::sqrt(1.0 - q * q * std::sin(t) * std::sin(t)); }, 0.0,
                             pi / 2);
}

} // namespace

TEST_CASE("lower bound examples") {
    CHECK(lower_bound(1, 1, PsiSequence::table({1, 0.1})) == doctest::Approx(0.9 / pi).epsilon(1e-14));
    CHECK(lower_bound(1, 1, PsiSequence::table({1, 0.1})) == doctest::Approx(0.286479).epsilon(1e-6));
    const auto psi = PsiSequence::power_law(5);
    const double tail = oracle::power_sum(5, 2'000'000, 5.0);
    CHECK(lower_bound(4, kInfinity, psi) == doctest::Approx(4.0 / pi * (std::pow(4.0, -5.0) - tail)).epsilon(1e-10));
    for (double p : {1.0, 1.5, 2.0, kInfinity})
        CHECK(lower_bound(1, p, PsiSequence::table({1})) == doctest::Approx(cos_pnorm(conjugate_exponent(p)) / pi));
    CHECK_THROWS_AS(lower_bound(1, 2, PsiSequence::power_law(1.5)), HypothesisViolation);
    CHECK_THROWS_AS(lower_bound(1, 2, PsiSequence::power_law(1.0)), HypothesisViolation);
}

TEST_CASE("upper bound examples") {
    for (double p : {1.0, 3.0, kInfinity})
        CHECK(upper_bound(1, p, PsiSequence::table({1})) == doctest::Approx(cos_pnorm(conjugate_exponent(p)) / pi));
    const auto psi = PsiSequence::power_law(5);
    const double tail = oracle::power_sum(5, 2'000'000, 5.0);
    CHECK(upper_bound(4, kInfinity, psi) == doctest::Approx(4.0 / pi * (std::pow(4.0, -5.0) + tail)).epsilon(1e-10));
    CHECK_THROWS_AS(upper_bound(1, 2, PsiSequence::power_law(1.0)), DivergentTailError);
}

TEST_CASE("bound gap equals twice the scaled tail") {
    for (const auto& psi : {PsiSequence::power_law(4), PsiSequence::exp_power(0.7, 1.3), PsiSequence::table({2, 1, 0.3})}) {
        for (double p : {1.0, 1.25, 2.0, 5.0, kInfinity}) {
            for (long n : {1L, 2L, 3L}) {
                if (!hypothesis_check(psi, n, Condition::TailBelowLead).holds) continue;
                const double c = cos_pnorm(conjugate_exponent(p)) / pi;
                const double gap = upper_bound(n, p, psi) - lower_bound(n, p, psi);
                CHECK(gap == doctest::Approx(2.0 * c * psi_tail(psi, n)).epsilon(1e-12).scale(1e-300));
            }
        }
    }
}

TEST_CASE("spike lower bound approaches the p = 1 bound") {
    const auto psi = PsiSequence::power_law(3);
    double prev = -1.0;
    for (int j = 3; j <= 10; ++j) {
        const double b = spike_lower_bound(2, psi, pi / std::ldexp(1.0, j));
        CHECK(b > prev);
        CHECK(b < lower_bound(2, 1, psi));
        prev = b;
    }
    CHECK(prev == doctest::Approx(lower_bound(2, 1, psi)).epsilon(1e-3));
}

TEST_CASE("elliptic K") {
    CHECK(std::abs(elliptic_K(0.0) - pi / 2) <= 1e-14);
    CHECK(elliptic_K(0.5) == doctest::Approx(1.6857504).epsilon(1e-7));
    for (int i = 0; i <= 9; ++i) {
        const double q = 0.1 * i;
        CHECK(std::abs(elliptic_K(q) - elliptic_oracle(q)) <= 1e-10);
    }
    CHECK(elliptic_K(0.9) > elliptic_K(0.5));
    CHECK(elliptic_K(0.5) > elliptic_K(0.0));
    CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
}

TEST_CASE("reference asymptotics") {
    CHECK(reference_asymptotics(10, 1, ReferenceFormula::Kolmogorov) ==
          doctest::Approx(4.0 / pi * std::log(10.0) / 10.0).epsilon(1e-14));
    CHECK(reference_asymptotics(2, 3, ReferenceFormula::StechkinHigh) == doctest::Approx(0.159155).epsilon(1e-6));
    // K(e^{-r/n}) -> pi/2 as r/n grows
    const double s1 = reference_asymptotics(2, 80, ReferenceFormula::StechkinElliptic);
    const double s2 = reference_asymptotics(2, 80, ReferenceFormula::StechkinHigh);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-15));
    CHECK(reference_asymptotics(3, 2, ReferenceFormula::WeylNagyP, 2.0) ==
          doctest::Approx(std::sqrt(pi) / pi / 9.0).epsilon(1e-14));
    CHECK(parse_reference_tag("S1") == ReferenceFormula::StechkinElliptic);
    CHECK(reference_tag(ReferenceFormula::WeylNagyP) == "Wp");
    CHECK_THROWS_AS(parse_reference_tag("X"), ConfigurationError);
    CHECK_THROWS_AS(reference_asymptotics(1, 2, ReferenceFormula::Kolmogorov), DomainError);
    CHECK_THROWS_AS(reference_asymptotics(3, 0.5, ReferenceFormula::StechkinElliptic), DomainError);
}

TEST_CASE("Weyl-Nagy bracket") {
    const auto rep = weyl_nagy_report(4, 5, kInfinity);
    const double lead = std::pow(4.0, -5.0);
    const double factor = 2.25 / std::pow(1.25, 5.0);
    CHECK(rep.reference.at("power_bracket_lower") == doctest::Approx(4.0 / pi * lead * (1.0 - factor)).epsilon(1e-14));
    CHECK(rep.reference.at("power_bracket_upper") == doctest::Approx(4.0 / pi * lead * (1.0 + factor)).epsilon(1e-14));
    CHECK(rep.tail < lead / std::pow(1.25, 5.0) * 2.25);
    CHECK(rep.passed());
    CHECK(rep.hypothesis.at("power_growth"));
    CHECK(rep.lower <= *rep.witness_value);
    CHECK(*rep.witness_value <= rep.upper);
    CHECK_THROWS_AS(weyl_nagy_report(4, 4.5, kInfinity), HypothesisViolation);
}

TEST_CASE("bracket factor vanishes when r = n^2") {
    double prev = kInfinity;
    for (long n = 2; n <= 10; ++n) {
        const auto nd = static_cast<double>(n);
        const double factor = (2.0 + 1.0 / nd) * std::pow(1.0 + 1.0 / nd, -nd * nd);
        CHECK(factor < prev);
        prev = factor;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("exponential bracket") {
    const auto rep = exp_class_report(2, 1, 2, kInfinity);
    CHECK(rep.reference.at("exp_bracket_lower") == doctest::Approx(4.0 / pi * std::exp(-4.0) * (1 - 1.25 * std::exp(-4.0))));
    CHECK(rep.reference.at("exp_bracket_upper") == doctest::Approx(4.0 / pi * std::exp(-4.0) * (1 + 1.25 * std::exp(-4.0))));
    double direct = 0.0;
    for (int k = 30; k >= 3; --k) direct += std::exp(-static_cast<double>(k) * k);
    CHECK(direct < std::exp(-4.0) * 1.25 * std::exp(-4.0));
    CHECK(rep.tail == doctest::Approx(direct).epsilon(1e-14));
    CHECK(rep.passed());
    double prev_width = kInfinity;
    for (long n = 2; n <= 6; ++n) {
        ReportOptions o;
        o.compute_witness = false;
        const auto r = exp_class_report(n, 1, 2, kInfinity, o);
        const double width = r.reference.at("exp_bracket_upper") - r.reference.at("exp_bracket_lower");
        CHECK(width < prev_width);
        prev_width = width;
    }
    CHECK_THROWS_AS(exp_class_report(2, 1, 1, kInfinity), HypothesisViolation);
}

TEST_CASE("bounds report sandwich and ratio") {
    for (double p : {1.0, 2.0, 4.0, kInfinity}) {
        for (long n : {2L, 3L}) {
            ReportOptions o;
            o.beta = BetaSequence::constant(1);
            const auto psi = PsiSequence::power_law(static_cast<double>(n + 1));
            const auto rep = bounds_report(n, p, psi, o);
            CAPTURE(p);
            CAPTURE(n);
            CHECK(rep.passed());
            CHECK(rep.witness_certified);
            const double c = p == 1.0 ? 1.0 : cos_pnorm(conjugate_exponent(p));
            const double tau = rep.tail / rep.psi_n;
            CHECK(rep.ratios.at("tau") == doctest::Approx(tau));
            if (p != 1.0) CHECK(std::abs(*rep.witness_value * pi / (c * rep.psi_n) - 1.0) <= tau);
        }
    }
}

TEST_CASE("bounds report refuses inadmissible points") {
    CHECK_THROWS_AS(bounds_report(1, 2, PsiSequence::power_law(1.5)), HypothesisViolation);
}
