#include "convapprox/extremal.hpp"

#include "convapprox/errors.hpp"
#include "convapprox/format.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

namespace convapprox {

namespace {

constexpr double kPi = std::numbers::pi;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double sin_pi(double x) {
    // sin(pi x) with the argument reduced exactly first
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    return std::sin(kPi * r);
}

void validate(const WitnessSpec& spec) {
    if (spec.n < 1) throw DomainError("witness order n must be >= 1");
    if (!(spec.p >= 1.0)) throw DomainError("witness exponent p must be >= 1");
    if (spec.p == 1.0 && spec.delta) {
        const double d = *spec.delta;
        if (!(d > 0.0 && d < kPi / 2.0)) throw DomainError("spike width delta must lie in (0, pi/2)");
    }
}

double spike_delta(const WitnessSpec& spec) {
    if (!spec.delta) throw ConfigurationError("p = 1 witness needs a spike width delta");
    return *spec.delta;
}

// Cosine coefficient of g(u) = phi(u / n) at frequency j, i.e. of phi at frequency j n.
double harmonic(const WitnessSpec& spec, long j) {
    if (j % 2 == 0) return 0.0; // g(u + pi) = -g(u)
    const auto jd = static_cast<double>(j);
    if (spec.p == 1.0) {
        const double delta = spike_delta(spec);
        return 2.0 * std::sin(0.5 * jd * delta) / (kPi * jd * delta);
    }
    const double pp = spec.p_prime();
    const double c = cos_pnorm(pp);
    // (4/pi) c^{1-p'} int_0^{pi/2} cos^nu(u) cos(j u) du with nu = p' - 1, using
    // int_0^{pi/2} cos^nu u cos(b u) du = pi Gamma(nu+1) / (2^{nu+1} Gamma(1+(nu+b)/2) Gamma(1+(nu-b)/2)).
    const double nu = pp - 1.0;
    const double A = 1.0 + 0.5 * (nu + jd);
    const double B = 1.0 + 0.5 * (nu - jd);
    double log_mag = std::log(4.0) + (1.0 - pp) * std::log(c) + std::lgamma(nu + 1.0) - (nu + 1.0) * std::log(2.0) -
                     std::lgamma(A);
    double sgn = 1.0;
    if (B > 0.0) {
        log_mag -= std::lgamma(B);
    } else {
        if (B == std::floor(B)) return 0.0; // pole of Gamma(B)
        const double s = sin_pi(B);
        if (s == 0.0) return 0.0;
        sgn = sign(s);
        log_mag += std::log(std::abs(s)) + std::lgamma(1.0 - B) - std::log(kPi);
    }
    return sgn * std::exp(log_mag);
}

// Total variation of g over one period; |harmonic(j)| <= variation / (pi j).
double phi_variation(const WitnessSpec& spec) {
    if (spec.p == 1.0) return 2.0 / spike_delta(spec);
    const double pp = spec.p_prime();
    return 4.0 * std::pow(cos_pnorm(pp), 1.0 - pp);
}

// sum over odd j of Re(d_j e^{i j n x}); coefficients stored for j = 1, 3, 5, ...
struct OddHarmonicSeries {
    double n;
    std::vector<std::complex<double>> coeff;

    double operator()(double x) const {
        if (coeff.empty()) return 0.0;
        const double y = n * x;
        const std::complex<double> w = std::polar(1.0, 2.0 * y);
        std::complex<double> acc = coeff.back();
        for (std::size_t m = coeff.size() - 1; m-- > 0;) acc = acc * w + coeff[m];
        return (acc * std::polar(1.0, y)).real();
    }
};

// Smallest odd J for which the harmonics j > J are guaranteed below `tol` in sup norm.
long harmonic_cutoff(const WitnessSpec& spec, double tol, long max_j) {
    const PsiSequence& psi = spec.psi;
    if (const auto* t = std::get_if<Table>(&psi.family())) {
        long J = static_cast<long>(t->values.size()) / spec.n;
        return J % 2 == 0 ? std::max(J - 1, 1L) : J;
    }
    const double V = phi_variation(spec);
    const double sup_coeff = spec.p == 1.0 ? 1.0 / kPi : V / kPi;
    auto bound = [&](long J) {
        const long K = (J + 1) * spec.n;
        // sum_{j>J} psi(j n) <= psi((J+1) n) + (1/n) sum_{k>=(J+1)n} psi(k)
        const double s = psi(K) + tail_upper_bound(psi, K - 1) / static_cast<double>(spec.n);
        return std::min(sup_coeff, V / (kPi * static_cast<double>(J + 1))) * s;
    };
    long hi = 1;
    while (bound(hi) > tol) {
        if (hi >= max_j) return max_j | 1L;
        hi = 2 * hi + 1;
    }
    long lo = (hi - 1) / 2;
    if (lo < 1) return 1;
    while (hi - lo > 2) {
        long mid = lo + (hi - lo) / 2;
        if (mid % 2 == 0) ++mid;
        if (mid >= hi) break;
        if (bound(mid) <= tol)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double harmonic_tail_bound(const WitnessSpec& spec, long J) {
    const PsiSequence& psi = spec.psi;
    if (std::holds_alternative<Table>(psi.family())) {
        const double s = tail_upper_bound(psi, (J + 1) * spec.n - 1);
        return s / kPi * (spec.p == 1.0 ? 1.0 : phi_variation(spec));
    }
    const double V = phi_variation(spec);
    const double sup_coeff = spec.p == 1.0 ? 1.0 / kPi : V / kPi;
    const long K = (J + 1) * spec.n;
    const double s = psi(K) + tail_upper_bound(psi, K - 1) / static_cast<double>(spec.n);
    return std::min(sup_coeff, V / (kPi * static_cast<double>(J + 1))) * s;
}

} // namespace

double phi_eval(const WitnessSpec& spec, double t) {
    validate(spec);
    const auto nd = static_cast<double>(spec.n);
    if (spec.p == 1.0) {
        const double delta = spike_delta(spec);
        const double m = std::round(t * nd / kPi);
        const double offset = t - m * kPi / nd;
        if (std::abs(offset) >= delta / (2.0 * nd)) return 0.0;
        const bool odd = std::fmod(std::abs(m), 2.0) == 1.0;
        return (odd ? -1.0 : 1.0) / (2.0 * delta);
    }
    const double cn = std::cos(nd * t);
    if (std::isinf(spec.p)) return sign(cn);
    const double pp = spec.p_prime();
    return std::pow(cos_pnorm(pp), 1.0 - pp) * std::pow(std::abs(cn), pp - 1.0) * sign(cn);
}

PeriodicFunction phi_function(const WitnessSpec& spec) {
    validate(spec);
    PeriodicFunction phi;
    phi.evaluator = [spec](double t) { return phi_eval(spec, t); };
    const auto nd = static_cast<double>(spec.n);
    if (spec.p == 1.0) {
        const double delta = spike_delta(spec);
        phi.smoothness = Smoothness::Discontinuous;
        for (long m = 0; m < 2 * spec.n; ++m) {
            phi.breakpoints.push_back(static_cast<double>(m) * kPi / nd - delta / (2.0 * nd));
            phi.breakpoints.push_back(static_cast<double>(m) * kPi / nd + delta / (2.0 * nd));
        }
        return phi;
    }
    phi.smoothness = std::isinf(spec.p) ? Smoothness::Discontinuous : Smoothness::Kinks;
    for (long m = 0; m < 2 * spec.n; ++m) phi.breakpoints.push_back((2.0 * static_cast<double>(m) + 1.0) * kPi / (2.0 * nd));
    return phi;
}

std::vector<double> phi_harmonics(const WitnessSpec& spec, long j_max) {
    validate(spec);
    if (j_max < 1) throw DomainError("j_max must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(j_max));
    for (long j = 1; j <= j_max; ++j) out.push_back(harmonic(spec, j));
    return out;
}

std::vector<double> alternation_points(long n, double beta_n) {
    if (n < 1) throw DomainError("n must be >= 1");
    const auto nd = static_cast<double>(n);
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(2 * n));
    for (long m = 0; m < 2 * n; ++m) x.push_back(beta_n * kPi / (2.0 * nd) + static_cast<double>(m) * kPi / nd);
    return x;
}

bool delta_admissible(long n, const PsiSequence& psi, double delta) {
    return 2.0 / delta * std::sin(0.5 * delta) * psi(n) > psi_tail(psi, n);
}

double default_delta(long n, const PsiSequence& psi) {
    const double lead = psi(n);
    const double tail = psi_tail(psi, n);
    if (!(tail < lead)) throw HypothesisViolation("tail condition violated: no admissible delta");
    for (int j = 2; j < 60; ++j) {
        const double delta = kPi / std::ldexp(1.0, j);
        const double factor = 2.0 / delta * std::sin(0.5 * delta);
        if (factor * lead - tail >= 0.5 * (lead - tail)) return delta;
    }
    throw HypothesisViolation("no admissible spike width found");
}

ExtremalWitness build_witness(const WitnessSpec& spec_in, const WitnessOptions& opts) {
    validate(spec_in);
    WitnessSpec spec = spec_in;
    const long n = spec.n;
    const auto nd = static_cast<double>(n);

    const auto hyp = hypothesis_check(spec.psi, n, Condition::TailBelowLead);
    if (!hyp.holds)
        throw HypothesisViolation("tail condition violated: sum_{k>n} psi(k) = " + shortest(hyp.lhs) +
                                  " is not below psi(n) = " + shortest(hyp.rhs));

    if (spec.p == 1.0) {
        if (!spec.delta) spec.delta = default_delta(n, spec.psi);
        if (!delta_admissible(n, spec.psi, *spec.delta))
            throw HypothesisViolation("theorem hypothesis violated: spike width delta = " + shortest(*spec.delta) +
                                      " is too large for a positive spike bound");
    }

    ExtremalWitness w{.spec = spec, .phi = phi_function(spec), .f = {}, .F1 = {}, .F2 = {}, .points = {}};
    w.delta = spec.p == 1.0 ? *spec.delta : 0.0;
    w.tail = psi_tail(spec.psi, n);
    const double norm_const = spec.p == 1.0 ? 1.0 : cos_pnorm(spec.p_prime());
    w.f2_sup_bound = norm_const / kPi * w.tail;

    const double lead_coeff = spec.p == 1.0 ? harmonic(spec, 1) : norm_const / kPi;
    w.lead_amplitude = lead_coeff * spec.psi(n);

    const double tol = opts.series_tol * std::max(w.lead_amplitude, std::numeric_limits<double>::min());
    const long J = harmonic_cutoff(spec, tol, opts.max_harmonic);
    w.harmonics = J;
    w.truncation_bound = harmonic_tail_bound(spec, J);

    auto full = std::make_shared<OddHarmonicSeries>();
    full->n = nd;
    for (long j = 1; j <= J; j += 2) {
        const double a = j == 1 ? lead_coeff : harmonic(spec, j);
        const double amp = a * spec.psi(j * n);
        const double theta = spec.beta(j * n) * kPi / 2.0;
        full->coeff.push_back(std::polar(amp, -theta));
    }
    while (full->coeff.size() > 1 && full->coeff.back() == std::complex<double>{}) full->coeff.pop_back();

    auto rest = std::make_shared<OddHarmonicSeries>(*full);
    rest->coeff.front() = 0.0;
    if (rest->coeff.size() == 1) rest->coeff.clear();

    const double amp1 = w.lead_amplitude;
    const double theta_n = spec.beta(n) * kPi / 2.0;
    w.F1 = PeriodicFunction::smooth([amp1, nd, theta_n](double x) { return amp1 * std::cos(nd * x - theta_n); });
    w.F2 = PeriodicFunction::smooth([rest](double x) { return (*rest)(x); });
    w.f = PeriodicFunction::smooth([full](double x) { return (*full)(x); });
    w.points = alternation_points(n, spec.beta(n));

    // sign pattern and margin at the alternation points
    const double margin = w.lead_amplitude - w.f2_sup_bound;
    for (std::size_t m = 0; m < w.points.size(); ++m) {
        const double v = w.f(w.points[m]);
        const double expected = m % 2 == 0 ? 1.0 : -1.0;
        if (sign(v) != expected || std::abs(v) < margin - 1e-12 * w.lead_amplitude)
            throw CertificationError("witness f fails the sign/margin condition at x_" + std::to_string(m));
    }
    return w;
}

double vallee_poussin_lower(const PeriodicFunction& f, std::span<const double> points) {
    if (points.size() < 2 || points.size() % 2 != 0)
        throw CertificationError("alternation needs an even number (>= 2) of points");
    double lowest = kInfinity;
    double first_sign = 0.0;
    for (std::size_t m = 0; m < points.size(); ++m) {
        const double v = f(points[m]);
        const double s = sign(v);
        if (s == 0.0) throw CertificationError("f vanishes at alternation point " + std::to_string(m));
        if (m == 0)
            first_sign = s;
        else if (s != (m % 2 == 0 ? first_sign : -first_sign))
            throw CertificationError("sign alternation fails at point " + std::to_string(m));
        lowest = std::min(lowest, std::abs(v));
    }
    return lowest;
}

double vallee_poussin_lower(const ExtremalWitness& witness) { return vallee_poussin_lower(witness.f, witness.points); }

} // namespace convapprox
