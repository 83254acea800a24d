#include "cli/sampled.hpp"

#include "cli/args.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace convapprox::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Spline {
    std::vector<double> x, y, m; // m = second derivatives at the nodes

    double operator()(double t) const {
        const std::size_t N = x.size();
        double u = std::fmod(t - x.front(), kTwoPi);
        if (u < 0) u += kTwoPi;
        u += x.front();
        auto it = std::upper_bound(x.begin(), x.end(), u);
        const std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        const std::size_t j = (i + 1) % N;
        const double xi = x[i];
        const double xj = j == 0 ? x.front() + kTwoPi : x[j];
        const double h = xj - xi;
        const double a = (xj - u) / h, b = (u - xi) / h;
        return a * y[i] + b * y[j] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[j]) * h * h / 6.0;
    }
};

} // namespace

Samples read_samples(std::istream& in) {
    Samples s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        std::string a, b, extra;
        fields >> a >> b;
        if (fields >> extra) throw UsageError("sample line " + std::to_string(lineno) + ": expected two columns");
        try {
            const double xv = parse_real(a), yv = parse_real(b);
            s.x.push_back(xv);
            s.y.push_back(yv);
        } catch (const UsageError&) {
            if (s.x.empty() && lineno == 1) continue; // header
            throw UsageError("sample line " + std::to_string(lineno) + ": not numeric");
        }
    }
    return s;
}

Samples read_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read sample file '" + path + "'");
    return read_samples(in);
}

PeriodicFunction periodic_spline(const Samples& s) {
    const std::size_t N = s.x.size();
    if (N < 4 || s.y.size() != N) throw UsageError("need at least 4 samples");
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) throw UsageError("samples must be finite");
        if (i && !(s.x[i] > s.x[i - 1])) throw UsageError("sample abscissae must be strictly increasing");
    }
    if (!(s.x.back() - s.x.front() < kTwoPi)) throw UsageError("samples must lie within one period of length 2 pi");

    auto sp = std::make_shared<Spline>();
    sp->x = s.x;
    sp->y = s.y;
    auto h = [&](std::size_t i) { return i + 1 < N ? s.x[i + 1] - s.x[i] : s.x.front() + kTwoPi - s.x.back(); };

    // cyclic tridiagonal system for the second derivatives
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t prev = (i + N - 1) % N, next = (i + 1) % N;
        const double hp = h(prev), hi = h(i);
        const auto I = static_cast<Eigen::Index>(i);
        trip.emplace_back(I, static_cast<Eigen::Index>(prev), hp / 6.0);
        trip.emplace_back(I, I, (hp + hi) / 3.0);
        trip.emplace_back(I, static_cast<Eigen::Index>(next), hi / 6.0);
        rhs(I) = (s.y[next] - s.y[i]) / hi - (s.y[i] - s.y[prev]) / hp;
    }
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw UsageError("spline system is singular");
    const Eigen::VectorXd m = lu.solve(rhs);
    sp->m.assign(m.data(), m.data() + m.size());

    PeriodicFunction f;
    f.evaluator = [sp](double t) { return (*sp)(t); };
    return f;
}

} // namespace convapprox::cli
