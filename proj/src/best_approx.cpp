#include "convapprox/best_approx.hpp"

#include "convapprox/errors.hpp"
#include "convapprox/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace convapprox {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

QuadratureSpec default_fourier_quad(long order) {
    QuadratureSpec q;
    q.panels = static_cast<int>(std::max<long>(64, 8 * (order + 1)));
    q.nodes_per_panel = 24;
    return q;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double wrap(double x, double start) {
    double y = std::fmod(x - start, kTwoPi);
    if (y < 0) y += kTwoPi;
    return start + y;
}

struct Extremum {
    double x;
    double e;
};

// Solve T(x_i) + (-1)^i h = f(x_i) for the 2n - 1 coefficients of T and the level h.
std::pair<TrigPolynomiald, double> solve_reference(const std::vector<double>& ref, const std::vector<double>& fx,
                                                   long n) {
    const auto N = static_cast<Eigen::Index>(2 * n);
    Eigen::MatrixXd M(N, N);
    Eigen::VectorXd rhs(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double x = ref[static_cast<std::size_t>(i)];
        M(i, 0) = 0.5;
        for (long k = 1; k < n; ++k) {
            M(i, k) = std::cos(static_cast<double>(k) * x);
            M(i, n - 1 + k) = std::sin(static_cast<double>(k) * x);
        }
        M(i, N - 1) = i % 2 == 0 ? 1.0 : -1.0;
        rhs(i) = fx[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
    TrigPolynomiald T(n - 1);
    T.a()(0) = sol(0);
    for (long k = 1; k < n; ++k) {
        T.a()(k) = sol(k);
        T.b()(k - 1) = sol(n - 1 + k);
    }
    return {T, sol(N - 1)};
}

// Alternating sequence of signed error maxima, one per sign run of the error on the circle.
std::vector<Extremum> alternating_extrema(const std::function<double(double)>& err, const std::vector<double>& ref,
                                          int grid) {
    std::vector<Extremum> pts;
    pts.reserve(static_cast<std::size_t>(grid) + ref.size());
    const double h = kTwoPi / grid;
    for (int i = 0; i < grid; ++i) pts.push_back({h * i, 0.0});
    for (double x : ref) pts.push_back({wrap(x, 0.0), 0.0});
    std::sort(pts.begin(), pts.end(), [](const Extremum& l, const Extremum& r) { return l.x < r.x; });
    for (auto& p : pts) p.e = err(p.x);

    // drop exact zeros; they belong to no run
    std::erase_if(pts, [](const Extremum& p) { return p.e == 0.0; });
    const std::size_t M = pts.size();
    if (M == 0) return {};

    // rotate so that index 0 starts a run
    std::size_t start = 0;
    while (start < M && sign(pts[start].e) == sign(pts[(start + M - 1) % M].e)) ++start;
    if (start == M) start = 0; // single run

    std::vector<Extremum> runs;
    std::size_t i = 0;
    while (i < M) {
        const double s = sign(pts[(start + i) % M].e);
        std::size_t best = i;
        while (i < M && sign(pts[(start + i) % M].e) == s) {
            if (std::abs(pts[(start + i) % M].e) > std::abs(pts[(start + best) % M].e)) best = i;
            ++i;
        }
        const std::size_t bi = (start + best) % M;
        double left = pts[(bi + M - 1) % M].x;
        double right = pts[(bi + 1) % M].x;
        if (left > pts[bi].x) left -= kTwoPi;
        if (right < pts[bi].x) right += kTwoPi;
        const auto signed_err = [&](double x) { return s * err(x); };
        auto [xr, vr] = refine_maximum(signed_err, left, right);
        Extremum ex = pts[bi];
        if (vr > s * ex.e) ex = {wrap(xr, 0.0), s * vr};
        runs.push_back(ex);
    }
    // first and last runs share a sign only when the whole circle is one run
    return runs;
}

// Remove points until exactly `target` alternating points remain, never dropping the largest.
void reduce_to(std::vector<Extremum>& pts, std::size_t target) {
    while (pts.size() > target) {
        const std::size_t m = pts.size();
        std::size_t k = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (std::abs(pts[i].e) < std::abs(pts[k].e)) k = i;
        if (m - target == 1) {
            // odd surplus cannot happen for alternating cyclic sequences; drop the smallest
            pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(k));
            continue;
        }
        const std::size_t prev = (k + m - 1) % m;
        const std::size_t next = (k + 1) % m;
        const std::size_t drop = std::abs(pts[prev].e) < std::abs(pts[next].e) ? prev : next;
        std::vector<std::size_t> gone{k, drop};
        std::sort(gone.rbegin(), gone.rend());
        for (std::size_t g : gone) pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(g));
    }
    std::sort(pts.begin(), pts.end(), [](const Extremum& l, const Extremum& r) { return l.x < r.x; });
}

} // namespace

TrigPolynomiald fourier_partial_sum(const PeriodicFunction& f, long order, std::optional<QuadratureSpec> quad) {
    if (order < 0) throw DomainError("partial sum order must be >= 0");
    const QuadratureSpec q = quad.value_or(default_fourier_quad(order));
    std::vector<double> bps = q.breakpoints;
    if (f.smoothness != Smoothness::Smooth) bps.insert(bps.end(), f.breakpoints.begin(), f.breakpoints.end());
    const auto panels = periodic_panels(q.panels, bps);
    const auto rule = gauss_legendre(q.nodes_per_panel);

    const auto nodes = panel_nodes(panels, rule, bps.empty() ? 0 : 14);
    std::vector<double> fw(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) fw[i] = nodes[i].w * f(nodes[i].x);

    TrigPolynomiald S(order);
    for (long k = 0; k <= order; ++k) {
        const auto kd = static_cast<double>(k);
        double ca = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            ca += fw[i] * std::cos(kd * nodes[i].x);
            sb += fw[i] * std::sin(kd * nodes[i].x);
        }
        S.a()(k) = ca / kPi;
        if (k > 0) S.b()(k - 1) = sb / kPi;
    }
    return S;
}

TrigPolynomiald fourier_partial_sum(const ExtremalWitness& w, long order) {
    if (order < 0) throw DomainError("partial sum order must be >= 0");
    if (order >= w.spec.n) throw DomainError("closed-form partial sum of a witness covers orders below n only");
    return TrigPolynomiald(order);
}

double remainder_sup(const PeriodicFunction& f, long order, std::optional<QuadratureSpec> quad) {
    const TrigPolynomiald S = fourier_partial_sum(f, order, std::move(quad));
    const auto g = PeriodicFunction::smooth([&](double t) { return f(t) - S(t); });
    return sup_norm(g, static_cast<int>(4096 * std::max<long>(1, order + 1)));
}

namespace {

RemezResult exchange(const PeriodicFunction& f, long n, std::vector<double> ref, const RemezOptions& opts, int grid,
                     double scale) {
    const std::size_t N = ref.size();
    RemezResult res;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        std::vector<double> fx(N);
        for (std::size_t i = 0; i < N; ++i) fx[i] = f(ref[i]);
        auto [T, h] = solve_reference(ref, fx, n);
        const auto err = [&, &T = T](double x) { return f(x) - T(x); };

        res.best = T;
        res.iterations = iter;
        res.level_history.push_back(std::abs(h));

        auto ext = alternating_extrema(err, ref, grid);
        double maxerr = 0.0;
        for (const auto& e : ext) maxerr = std::max(maxerr, std::abs(e.e));

        if (maxerr <= 1e-13 * std::max(scale, std::numeric_limits<double>::min()) || scale == 0.0) {
            // f is (numerically) a polynomial of order < n
            res.value = 0.0;
            res.leveled_error = 0.0;
            res.extrema = ref;
            res.extrema_errors.assign(N, 0.0);
            res.alternations = static_cast<int>(N);
            res.certified = true;
            return res;
        }

        const bool converged = (maxerr - std::abs(h)) <= opts.tol * maxerr;
        if (converged || ext.size() < N || iter == opts.max_iter) {
            res.value = maxerr;
            res.leveled_error = std::abs(h);
            res.extrema = ref;
            res.extrema_errors.clear();
            for (double x : ref) res.extrema_errors.push_back(err(x));

            // certificate: alternating signs and near-maximal modulus at all 2n reference points
            int alternating = 0;
            double lowest = kInfinity;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = res.extrema_errors[i];
                const double prev = res.extrema_errors[(i + N - 1) % N];
                if (sign(e) != 0.0 && sign(e) == -sign(prev) && std::abs(e) >= (1.0 - opts.tol) * maxerr) ++alternating;
                lowest = std::min(lowest, std::abs(e));
            }
            res.alternations = alternating;
            res.leveled_error = std::min(res.leveled_error, lowest);
            res.certified = converged && alternating >= static_cast<int>(N);
            return res;
        }

        reduce_to(ext, N);
        ref.clear();
        for (const auto& e : ext) ref.push_back(e.x);
    }
    return res;
}

} // namespace

RemezResult remez_trig(const PeriodicFunction& f, long n, const RemezOptions& opts) {
    if (n < 1) throw DomainError("remez needs n >= 1");
    if (!(opts.tol > 0.0) || opts.max_iter < 1) throw DomainError("remez needs tol > 0 and max_iter >= 1");
    const std::size_t N = static_cast<std::size_t>(2 * n);
    const int grid = std::max(256, opts.grid_per_order * static_cast<int>(n));

    double scale = 0.0;
    for (int i = 0; i < grid; ++i) scale = std::max(scale, std::abs(f(kTwoPi * i / grid)));

    std::vector<std::vector<double>> starts;
    if (!opts.initial_reference.empty()) {
        if (opts.initial_reference.size() != N) throw DomainError("initial reference needs exactly 2n points");
        std::vector<double> ref;
        const double start = opts.initial_reference.front();
        for (double x : opts.initial_reference) ref.push_back(wrap(x, start));
        std::sort(ref.begin(), ref.end());
        starts.push_back(std::move(ref));
    }
    // equispaced references; the shifted ones recover when f vanishes on the unshifted grid
    for (double offset : {0.0, 0.5, 0.6180339887498949, 0.2360679774997897}) {
        std::vector<double> ref;
        for (std::size_t i = 0; i < N; ++i)
            ref.push_back(kTwoPi * (static_cast<double>(i) + offset) / static_cast<double>(N));
        starts.push_back(std::move(ref));
    }

    RemezResult res;
    for (auto& ref : starts) {
        res = exchange(f, n, std::move(ref), opts, grid, scale);
        if (res.certified) break;
    }
    return res;
}

RemezResult remez_trig(const ExtremalWitness& w, RemezOptions opts) {
    if (opts.initial_reference.empty()) opts.initial_reference = w.points;
    return remez_trig(w.f, w.spec.n, opts);
}

} // namespace convapprox
