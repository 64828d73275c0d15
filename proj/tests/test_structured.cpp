#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ht/constructors.hpp"
#include "ht/structured.hpp"
#include "test_util.hpp"

using namespace ht;
using test::random_scalar;
using test::rel_err;

namespace {

Signature unit_sig(int n, const AlgebraContext& ctx) {
    return Signature(Matrix::identity(n), ctx);
}

} // namespace

TEST_CASE("signature validation") {
    AlgebraContext ctx(-1.0);
    Matrix j(2, 2);
    j(0, 0) = Scalar(1.0);
    j(1, 1) = Scalar(-1.0);
    CHECK_NOTHROW(Signature(j, ctx));
    Matrix bad(2, 2);
    bad(0, 0) = Scalar(2.0);
    bad(1, 1) = Scalar(1.0);
    CHECK_THROWS_AS(Signature(bad, ctx), PreconditionViolated);
}

TEST_CASE("line blaschke certificate") {
    for (double t : {-1.0, 0.5}) {
        AlgebraContext ctx(t);
        Scalar alpha = Scalar::from_quadruple({1.5, 0.3, 0.2, -0.1});
        auto bl = blaschke_line(alpha, ctx);
        Certificate cert = solve_certificate(bl.node, unit_sig(1, ctx),
                                             CertKind::LineJUnitary);
        const double h_true = -1.0 / (2.0 * alpha.a().real());
        CHECK(test::scalar_err(cert.H(0, 0), Scalar(h_true)) < 1e-9);
        auto rep = verify_certificate(bl.node, unit_sig(1, ctx), cert,
                                      default_samples(bl.node, cert.kind));
        CHECK(rep.ok);
        CHECK(rep.max_residual < 1e-8);
    }
}

TEST_CASE("circle blaschke certificate") {
    AlgebraContext ctx(-1.0);
    Scalar alpha = Scalar::from_quadruple({0.3, 0.2, -0.1, 0.25});
    auto bc = blaschke_circle(alpha, ctx);
    Certificate cert = solve_certificate(bc.node, unit_sig(1, ctx),
                                         CertKind::CircleJUnitary);
    const double h_true = 1.0 - norm_form(alpha, ctx);
    CHECK(test::scalar_err(cert.H(0, 0), Scalar(h_true)) < 1e-9);
    auto rep = verify_certificate(bc.node, unit_sig(1, ctx), cert,
                                  default_samples(bc.node, cert.kind));
    CHECK(rep.ok);
}

TEST_CASE("2x2 line pair recovers the antidiagonal H") {
    AlgebraContext ctx(-1.0);
    Scalar alpha = Scalar::from_quadruple({1.0, 0.5, 0.0, 0.2});
    Scalar beta = Scalar::from_quadruple({0.7, -0.2, 0.3, 0.0});
    auto pr = blaschke_line_pair(alpha, beta, ctx);
    Certificate cert =
        solve_certificate(pr.node, pr.J, CertKind::LineJUnitary);
    // H is unique up to the solver's normalization; compare as a multiple
    // of the stored certificate.
    const double scale = cert.H(0, 1).a().real() / pr.cert.H(0, 1).a().real();
    CHECK(rel_err(cert.H, pr.cert.H * scale, ctx) < 1e-7);
    auto rep = verify_certificate(pr.node, pr.J, pr.cert,
                                  default_samples(pr.node, cert.kind));
    CHECK(rep.ok);
}

TEST_CASE("perturbation is detected") {
    AlgebraContext ctx(-1.0);
    auto bl = blaschke_line(Scalar(2.0), ctx);
    Certificate cert = bl.cert;
    Node broken = bl.node;
    broken.B(0, 0) += Scalar(1e-3);
    auto rep = verify_certificate(broken, unit_sig(1, ctx), cert,
                                  default_samples(broken, cert.kind));
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_residual >= 1e-4);
}

TEST_CASE("certificate transforms contravariantly under similarity") {
    AlgebraContext ctx(-1.0);
    auto b1 = blaschke_line(Scalar(2.0), ctx);
    auto b2 = blaschke_line(Scalar::from_quadruple({1, 1, 0, 0}), ctx);
    Node prod = node_product(b1.node, b2.node);
    Certificate cert =
        solve_certificate(prod, unit_sig(1, ctx), CertKind::LineJUnitary);
    std::mt19937 rng(30);
    Matrix s = test::random_matrix(rng, 2, 2) + Matrix::identity(2) * 3.0;
    Matrix si = mat_inv(s, ctx);
    Node moved(mat_mul(s, mat_mul(prod.A, si, ctx), ctx), mat_mul(s, prod.B, ctx),
               mat_mul(prod.C, si, ctx), prod.D, ctx);
    Certificate cert2 =
        solve_certificate(moved, unit_sig(1, ctx), CertKind::LineJUnitary);
    Matrix back = mat_mul(conj_star(s), mat_mul(cert2.H, s, ctx), ctx);
    const double scale =
        frob_norm(cert.H, ctx) > 0 ? frob_norm(back, ctx) / frob_norm(cert.H, ctx)
                                   : 1.0;
    CHECK(rel_err(back, cert.H * scale, ctx) < 1e-6);
}

TEST_CASE("line J-unitary implies the indefinite-lyapunov consequence") {
    AlgebraContext ctx(-1.0);
    auto b1 = blaschke_line(Scalar::from_quadruple({1.3, 0.4, 0.1, 0}), ctx);
    Node n = b1.node;
    Matrix h = b1.cert.H;
    Matrix lhs = mat_mul(mat_inv(h, ctx), mat_mul(conj_star(n.A), h, ctx), ctx);
    CHECK(frob_norm(lhs + a_times(n), ctx) < 1e-9);
}

TEST_CASE("solver preconditions") {
    AlgebraContext ctx(-1.0);
    auto bl = blaschke_line(Scalar(2.0), ctx);
    CHECK_THROWS_AS((void)solve_certificate(bl.node, std::nullopt,
                                            CertKind::LineJUnitary),
                    KindMismatch);
    // circle kinds need invertible A
    Node zero_a(Matrix(1, 1), Matrix::identity(1), Matrix::identity(1),
                Matrix::identity(1), ctx);
    CHECK_THROWS_AS((void)solve_certificate(zero_a, unit_sig(1, ctx),
                                            CertKind::CircleJUnitary),
                    AInvertibilityRequired);
    // non-minimal input rejected
    Matrix a2(2, 2), b2(2, 1), c2(1, 2);
    a2(0, 0) = Scalar(2.0);
    b2(0, 0) = Scalar(4.0);
    c2(0, 0) = Scalar(1.0);
    Node padded(a2, b2, c2, Matrix::identity(1), ctx);
    CHECK_THROWS_AS((void)solve_certificate(padded, unit_sig(1, ctx),
                                            CertKind::LineJUnitary),
                    NotMinimal);
    // a generic function is not in the class
    std::mt19937 rng(31);
    Node generic(test::random_matrix(rng, 2, 2), test::random_matrix(rng, 2, 1),
                 test::random_matrix(rng, 1, 2),
                 Matrix::identity(1) + test::random_matrix(rng, 1, 1), ctx);
    CHECK_THROWS_AS((void)solve_certificate(generic, unit_sig(1, ctx),
                                            CertKind::LineJUnitary),
                    NotInClass);
}

TEST_CASE("anti-symmetrization on the line") {
    AlgebraContext ctx(-1.0);
    std::mt19937 rng(32);
    Node psi(test::random_matrix(rng, 2, 2) * 0.4, test::random_matrix(rng, 2, 1),
             test::random_matrix(rng, 1, 2), test::random_matrix(rng, 1, 1), ctx);
    Node phi = make_phi_from_psi(psi, CertKind::LineAntiSym);
    for (double x : default_samples(phi, CertKind::LineAntiSym)) {
        Matrix sum = eval(phi, x) + conj_star(eval(phi, -x));
        CHECK(frob_norm(sum, ctx) < 1e-9);
    }
    // H = antidiag(I, I) certifies the doubled node
    const int n2 = phi.state_dim();
    Matrix h(n2, n2);
    for (int i = 0; i < n2 / 2; ++i) {
        h(i, n2 / 2 + i) = Scalar(1.0);
        h(n2 / 2 + i, i) = Scalar(1.0);
    }
    Certificate cert{h, CertKind::LineAntiSym, {}};
    auto rep = verify_certificate(phi, std::nullopt, cert,
                                  default_samples(phi, cert.kind));
    CHECK(rep.ok);
}

TEST_CASE("anti-symmetrization on the circle") {
    AlgebraContext ctx(-1.0);
    std::mt19937 rng(33);
    Node psi(test::random_matrix(rng, 2, 2) * 0.4 + Matrix::identity(2) * 2.0,
             test::random_matrix(rng, 2, 1), test::random_matrix(rng, 1, 2),
             test::random_matrix(rng, 1, 1), ctx);
    Node phi = make_phi_from_psi(psi, CertKind::CircleAntiSym);
    for (double x : default_samples(phi, CertKind::CircleAntiSym)) {
        if (std::abs(x) < 0.01) continue;
        Matrix sum = eval(phi, x) + conj_star(eval(phi, 1.0 / x));
        CHECK(frob_norm(sum, ctx) < 1e-8);
    }
    Node singular_a(Matrix(1, 1), Matrix::identity(1), Matrix::identity(1),
                    Matrix::identity(1), ctx);
    CHECK_THROWS_AS((void)make_phi_from_psi(singular_a, CertKind::CircleAntiSym),
                    AInvertibilityRequired);
}

TEST_CASE("unipotent embedding of an anti-symmetric function") {
    AlgebraContext ctx(-1.0);
    // phi(x) = 2x(1 - x x0)^{-1} with skew x0 is line anti-symmetric
    Node phi(Matrix::scalar(Scalar::j() * 0.5), Matrix::scalar(Scalar(2.0)),
             Matrix::identity(1), Matrix(1, 1), ctx);
    Node T = embed_T(phi);
    CHECK(T.out_dim() == 2);
    for (double x : default_samples(phi, CertKind::LineAntiSym)) {
        Matrix tx = eval(T, x);
        CHECK(test::scalar_err(tx(0, 1), eval(phi, x)(0, 0)) < 1e-10);
        CHECK(test::scalar_err(tx(0, 0), Scalar::one()) < 1e-12);
        CHECK(test::scalar_err(tx(1, 1), Scalar::one()) < 1e-12);
        CHECK(tx(1, 0).is_zero(1e-12));
    }
    Matrix j(2, 2);
    j(0, 1) = Scalar(1.0);
    j(1, 0) = Scalar(1.0);
    Certificate phi_cert =
        solve_certificate(phi, std::nullopt, CertKind::LineAntiSym);
    Certificate t_cert{-phi_cert.H, CertKind::LineJUnitary, {}};
    auto rep = verify_certificate(T, Signature(j, ctx), t_cert,
                                  default_samples(T, CertKind::LineJUnitary));
    CHECK(rep.ok);
}

TEST_CASE("kernel identities hold for all four kinds") {
    AlgebraContext ctx(-1.0);
    // line J-unitary
    auto bl = blaschke_line(Scalar::from_quadruple({1.2, 0.5, 0.3, 0}), ctx);
    auto rep1 = verify_certificate(bl.node, unit_sig(1, ctx), bl.cert,
                                   default_samples(bl.node, bl.cert.kind));
    CHECK(rep1.ok);
    // circle J-unitary
    auto bc = blaschke_circle(Scalar::from_quadruple({0.4, 0.1, 0.2, 0}), ctx);
    auto rep2 = verify_certificate(bc.node, unit_sig(1, ctx), bc.cert,
                                   default_samples(bc.node, bc.cert.kind));
    CHECK(rep2.ok);
    // line anti-symmetric: x(1 - x j)^{-1}
    Node la(Matrix::scalar(Scalar::j()), Matrix::identity(1), Matrix::identity(1),
            Matrix(1, 1), ctx);
    Certificate c3 = solve_certificate(la, std::nullopt, CertKind::LineAntiSym);
    auto rep3 =
        verify_certificate(la, std::nullopt, c3, default_samples(la, c3.kind));
    CHECK(rep3.ok);
    // circle anti-symmetric: (1/2)(1 + x p0)(1 - x p0)^{-1}, p0 p0^* = 1
    Scalar p0 = Scalar::from_quadruple({0.6, 0.8, 0, 0});
    Node ca(Matrix::scalar(p0), Matrix::identity(1), Matrix::scalar(p0),
            Matrix::scalar(Scalar(0.5)), ctx);
    Certificate c4 = solve_certificate(ca, std::nullopt, CertKind::CircleAntiSym);
    auto rep4 =
        verify_certificate(ca, std::nullopt, c4, default_samples(ca, c4.kind));
    CHECK(rep4.ok);
}
