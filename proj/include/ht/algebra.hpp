#ifndef HT_ALGEBRA_HPP
#define HT_ALGEBRA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

#include <Eigen/Dense>

#include "ht/errors.hpp"

namespace ht {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

// Scale parameter of the algebra.  t = -1 gives the quaternions,
// t = 1 the split quaternions; t = 0 is rejected.
struct AlgebraContext {
    double t;

    explicit AlgebraContext(double scale) : t(scale) {
        if (t == 0.0) throw PreconditionViolated("AlgebraContext: t must be nonzero");
    }
};

// Element q = a + b*j_t with a, b complex.  The real quadruple
// (x0, x1, x2, x3) relative to the basis {1, i, j_t, k_t} is recovered as
// a = x0 + i*x1, b = x2 + i*x3.  Scalars do not carry t; operations that
// need it take the AlgebraContext.
class Scalar {
public:
    Scalar() : a_(0.0), b_(0.0) {}
    Scalar(double real) : a_(real), b_(0.0) {} // NOLINT: implicit by design
    Scalar(Complex a, Complex b) : a_(a), b_(b) {}

    static Scalar one() { return Scalar(1.0); }
    static Scalar i() { return Scalar(Complex(0, 1), 0.0); }
    static Scalar j() { return Scalar(0.0, 1.0); }
    static Scalar k() { return Scalar(0.0, Complex(0, 1)); }

    static Scalar from_quadruple(const std::array<double, 4>& x) {
        return Scalar(Complex(x[0], x[1]), Complex(x[2], x[3]));
    }
    std::array<double, 4> quadruple() const {
        return {a_.real(), a_.imag(), b_.real(), b_.imag()};
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }

    bool is_zero(double tol = 0.0) const {
        return std::abs(a_) <= tol && std::abs(b_) <= tol;
    }

    Scalar operator-() const { return Scalar(-a_, -b_); }
    Scalar& operator+=(const Scalar& o) { a_ += o.a_; b_ += o.b_; return *this; }
    Scalar& operator-=(const Scalar& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    Scalar& operator*=(double s) { a_ *= s; b_ *= s; return *this; }

    friend Scalar operator+(Scalar p, const Scalar& q) { return p += q; }
    friend Scalar operator-(Scalar p, const Scalar& q) { return p -= q; }
    friend Scalar operator*(Scalar p, double s) { return p *= s; }
    friend Scalar operator*(double s, Scalar p) { return p *= s; }

private:
    Complex a_, b_;
};

using Embedded2x2 = Eigen::Matrix2cd;

// Cayley-table product: j_t * z = conj(z) * j_t and j_t^2 = t.
inline Scalar mul(const Scalar& p, const Scalar& q, const AlgebraContext& ctx) {
    return Scalar(p.a() * q.a() + ctx.t * p.b() * std::conj(q.b()),
                  p.a() * q.b() + p.b() * std::conj(q.a()));
}

// The *-adjoint: (a, b) -> (conj(a), -b).  Involutive, contravariant.
inline Scalar conj_star(const Scalar& q) {
    return Scalar(std::conj(q.a()), -q.b());
}

// The Pontryagin symmetry (a, b) -> (a, -b); [p, Jp] is positive for t > 0.
inline Scalar j_symmetry(const Scalar& q) {
    return Scalar(q.a(), -q.b());
}

// q * conj_star(q) = |a|^2 - t |b|^2, always real.
inline double norm_form(const Scalar& q, const AlgebraContext& ctx) {
    return std::norm(q.a()) - ctx.t * std::norm(q.b());
}

inline Embedded2x2 embed(const Scalar& q, const AlgebraContext& ctx) {
    Embedded2x2 m;
    m << q.a(), ctx.t * q.b(), std::conj(q.b()), std::conj(q.a());
    return m;
}

inline Scalar unembed(const Embedded2x2& m, const AlgebraContext& ctx,
                      double tol = kDefaultTol) {
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if (std::abs(m(1, 1) - std::conj(m(0, 0))) > tol * scale ||
        std::abs(m(0, 1) - ctx.t * std::conj(m(1, 0))) > tol * scale)
        throw NotStructured("unembed: 2x2 block violates the H_t structure");
    return Scalar(m(0, 0), std::conj(m(1, 0)));
}

inline Scalar invert(const Scalar& q, const AlgebraContext& ctx,
                     double tol = kDefaultTol) {
    const double n = norm_form(q, ctx);
    if (std::abs(n) <= tol)
        throw ZeroDivisor("invert: q*q^* vanishes");
    return conj_star(q) * (1.0 / n);
}

// Real bilinear form [p, q] = Tr(I(p^*) I(q)); symmetric and non-degenerate.
inline double bilinear(const Scalar& p, const Scalar& q, const AlgebraContext& ctx) {
    return 2.0 * (std::real(q.a() * std::conj(p.a())) -
                  ctx.t * std::real(q.b() * std::conj(p.b())));
}

inline bool approx_equal(const Scalar& p, const Scalar& q, double tol = kDefaultTol) {
    return std::abs(p.a() - q.a()) <= tol && std::abs(p.b() - q.b()) <= tol;
}

std::ostream& operator<<(std::ostream& os, const Scalar& q);

} // namespace ht

#endif // HT_ALGEBRA_HPP
