#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace convapprox {

/// T(x) = a_0 / 2 + sum_{k=1}^{order} (a_k cos kx + b_k sin kx).
///
/// `a` holds a_0..a_order, `b` holds b_1..b_order (b(k-1) is b_k).
template <typename Scalar>
class TrigPolynomial {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    TrigPolynomial() : a_(Vector::Zero(1)), b_(Vector::Zero(0)) {}

    explicit TrigPolynomial(Eigen::Index order) : a_(Vector::Zero(order + 1)), b_(Vector::Zero(order)) {
        if (order < 0) throw std::invalid_argument("trigonometric polynomial order must be >= 0");
    }

    TrigPolynomial(Vector a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.size() < 1 || b_.size() != a_.size() - 1)
            throw std::invalid_argument("need a_0..a_m and b_1..b_m");
    }

    Eigen::Index order() const noexcept { return b_.size(); }
    const Vector& a() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }
    Vector& a() noexcept { return a_; }
    Vector& b() noexcept { return b_; }

    Scalar operator()(Scalar x) const {
        // running e^{ikx} via angle addition; refreshed periodically to bound drift
        Scalar s = a_(0) / 2;
        const Scalar c1 = std::cos(x), s1 = std::sin(x);
        Scalar ck = 1, sk = 0;
        for (Eigen::Index k = 1; k <= order(); ++k) {
            if (k % 32 == 0) {
                ck = std::cos(Scalar(k) * x);
                sk = std::sin(Scalar(k) * x);
            } else {
                const Scalar cn = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = cn;
            }
            s += a_(k) * ck + b_(k - 1) * sk;
        }
        return s;
    }

    /// max |coefficient|; zero exactly for the zero polynomial.
    Scalar max_abs_coefficient() const {
        Scalar m = a_.cwiseAbs().maxCoeff();
        if (b_.size() > 0) m = std::max(m, b_.cwiseAbs().maxCoeff());
        return m;
    }

    friend TrigPolynomial operator+(const TrigPolynomial& l, const TrigPolynomial& r) {
        const Eigen::Index ord = std::max(l.order(), r.order());
        TrigPolynomial out(ord);
        out.a_.head(l.a_.size()) += l.a_;
        out.a_.head(r.a_.size()) += r.a_;
        out.b_.head(l.b_.size()) += l.b_;
        out.b_.head(r.b_.size()) += r.b_;
        return out;
    }

    friend TrigPolynomial operator*(Scalar c, const TrigPolynomial& p) { return TrigPolynomial(c * p.a_, c * p.b_); }

private:
    Vector a_;
    Vector b_;
};

using TrigPolynomiald = TrigPolynomial<double>;

} // namespace convapprox
