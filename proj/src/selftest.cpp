#include "ht/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ht/constructors.hpp"
#include "ht/factorization.hpp"

namespace ht {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            why << msg;
        }
    }
    void expect_near(double value, double bound, const std::string& msg) {
        if (value > bound && ok) {
            ok = false;
            why << msg << " (got " << value << ", bound " << bound << ")";
        }
    }
};

Scalar random_scalar(std::mt19937& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    return Scalar::from_quadruple({u(rng), u(rng), u(rng), u(rng)});
}

Matrix random_matrix(std::mt19937& rng, int rows, int cols, double amp = 1.0) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = random_scalar(rng, amp);
    return m;
}

Matrix unit_column(int n, int i) {
    Matrix e(n, 1);
    e(i, 0) = Scalar::one();
    return e;
}

double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / (1.0 + b.norm());
}

// ---------------------------------------------------------------------------

Check criterion_quaternion_sanity() {
    Check c;
    AlgebraContext ctx(-1.0);
    const Scalar one = Scalar::one(), i = Scalar::i(), j = Scalar::j(), k = Scalar::k();
    const Scalar basis[4] = {one, i, j, k};
    // Full multiplication table at t = -1.
    const Scalar expected[4][4] = {
        {one, i, j, k},
        {i, -one, k, -j},
        {j, -k, -one, i},
        {k, j, -i, -one},
    };
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            c.expect(approx_equal(mul(basis[r], basis[s], ctx), expected[r][s], 0.0),
                     "Cayley table mismatch at (" + std::to_string(r) + "," +
                         std::to_string(s) + ")");
    std::mt19937 rng(101);
    for (int n = 0; n < 1000 && c.ok; ++n) {
        Scalar q = random_scalar(rng);
        if (q.is_zero(1e-12)) continue;
        c.expect(norm_form(q, ctx) > 0.0, "norm form not positive at t=-1");
    }
    return c;
}

Check criterion_embedding_oracle() {
    Check c;
    std::mt19937 rng(202);
    const double ts[2] = {-1.0, 2.0};
    for (int n = 0; n < 1000 && c.ok; ++n) {
        AlgebraContext ctx(ts[n % 2]);
        Scalar p = random_scalar(rng), q = random_scalar(rng);
        c.expect_near(rel_err(Eigen::MatrixXcd(embed(mul(p, q, ctx), ctx)),
                              Eigen::MatrixXcd(embed(p, ctx) * embed(q, ctx))),
                      1e-12, "scalar embedding homomorphism");
    }
    std::uniform_int_distribution<int> dim(1, 6);
    for (int n = 0; n < 200 && c.ok; ++n) {
        AlgebraContext ctx(ts[n % 2]);
        const int a = dim(rng), b = dim(rng), d = dim(rng);
        Matrix M = random_matrix(rng, a, b), N = random_matrix(rng, b, d);
        c.expect_near(rel_err(embed(mat_mul(M, N, ctx), ctx),
                              embed(M, ctx) * embed(N, ctx)),
                      1e-12, "matrix embedding homomorphism");
    }
    return c;
}

Check criterion_line_blaschke() {
    Check c;
    std::mt19937 rng(303);
    const double ts[4] = {-1.0, -0.5, 0.5, 2.0};
    int done = 0;
    while (done < 100 && c.ok) {
        AlgebraContext ctx(ts[done % 4]);
        Scalar alpha = random_scalar(rng);
        const double s = 2.0 * alpha.a().real();
        if (std::abs(s) <= 0.1) continue;
        ++done;
        auto built = blaschke_line(alpha, ctx);
        Signature J(Matrix::identity(1), ctx);
        Certificate cert = solve_certificate(built.node, J, CertKind::LineJUnitary);
        c.expect_near(std::abs(cert.H(0, 0).a().real() + 1.0 / s) +
                          std::abs(cert.H(0, 0).a().imag()) +
                          std::abs(cert.H(0, 0).b()),
                      1e-9, "h != -1/(alpha+alpha^*)");
        auto rep = verify_certificate(built.node, J, cert,
                                      default_samples(built.node, cert.kind));
        c.expect_near(rep.max_residual, 1e-8, "line Blaschke verification");
    }
    return c;
}

Check criterion_circle_blaschke() {
    Check c;
    std::mt19937 rng(404);
    const double ts[4] = {-1.0, -0.5, 0.5, 2.0};
    int done = 0;
    while (done < 100 && c.ok) {
        AlgebraContext ctx(ts[done % 4]);
        Scalar alpha = random_scalar(rng, 0.8);
        const double h = 1.0 - norm_form(alpha, ctx);
        if (std::abs(h) <= 0.1) continue;
        ++done;
        auto built = blaschke_circle(alpha, ctx);
        Signature J(Matrix::identity(1), ctx);
        Certificate cert = solve_certificate(built.node, J, CertKind::CircleJUnitary);
        c.expect_near(std::abs(cert.H(0, 0).a().real() - h) +
                          std::abs(cert.H(0, 0).a().imag()) +
                          std::abs(cert.H(0, 0).b()),
                      1e-9, "h != 1 - alpha alpha^*");
        auto rep = verify_certificate(built.node, J, cert,
                                      default_samples(built.node, cert.kind));
        c.expect_near(rep.max_residual, 1e-8, "circle Blaschke verification");
    }
    return c;
}

void check_kernel_entries(Check& c, const VerifyReport& rep, const std::string& tag) {
    int pairs = 0;
    for (const auto& [label, r] : rep.entries)
        if (label.rfind("kernel@", 0) == 0) {
            ++pairs;
            c.expect_near(r, 1e-8, tag + " kernel residual");
        }
    c.expect(pairs >= 20, tag + ": fewer than 20 admissible pairs");
}

Check criterion_kernel_identities() {
    Check c;
    AlgebraContext ctx(-1.0);
    Signature J1(Matrix::identity(1), ctx);
    {
        auto built = blaschke_line(Scalar(Complex(1, 0), Complex(1, 0)), ctx);
        auto cert = solve_certificate(built.node, J1, CertKind::LineJUnitary);
        check_kernel_entries(c, verify_certificate(built.node, J1, cert,
                                                   default_samples(built.node, cert.kind)),
                             "line-junitary");
    }
    {
        auto built = blaschke_circle(Scalar(Complex(0.5, 0), Complex(0, 0.3)), ctx);
        auto cert = solve_certificate(built.node, J1, CertKind::CircleJUnitary);
        check_kernel_entries(c, verify_certificate(built.node, J1, cert,
                                                   default_samples(built.node, cert.kind)),
                             "circle-junitary");
    }
    {
        // phi(x) = x(1 - x j)^{-1}, pole parameter skew.
        Node phi(Matrix::scalar(Scalar::j()), Matrix::identity(1),
                 Matrix::identity(1), Matrix(1, 1), ctx);
        auto cert = solve_certificate(phi, std::nullopt, CertKind::LineAntiSym);
        check_kernel_entries(c, verify_certificate(phi, std::nullopt, cert,
                                                   default_samples(phi, cert.kind)),
                             "line-antisym");
    }
    {
        // phi(x) = 1/2 (1 + x p0)(1 - x p0)^{-1} with p0 p0^* = 1.
        Scalar p0(Complex(0.6, 0), Complex(0.8, 0));
        Node phi(Matrix::scalar(p0), Matrix::identity(1), Matrix::scalar(p0),
                 Matrix::scalar(Scalar(0.5)), ctx);
        auto cert = solve_certificate(phi, std::nullopt, CertKind::CircleAntiSym);
        check_kernel_entries(c, verify_certificate(phi, std::nullopt, cert,
                                                   default_samples(phi, cert.kind)),
                             "circle-antisym");
    }
    return c;
}

Scalar random_stable_alpha(std::mt19937& rng, const AlgebraContext& ctx) {
    for (;;) {
        Scalar a = random_scalar(rng, 0.7);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
            Eigen::MatrixXcd(embed(a, ctx)), false);
        const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
        if (rho > 1e-3 && rho < 0.8) return a;
    }
}

Check criterion_theta_stein() {
    Check c;
    std::mt19937 rng(606);
    const double ts[2] = {-1.0, 0.5};
    for (int N = 1; N <= 5 && c.ok; ++N) {
        AlgebraContext ctx(ts[N % 2]);
        std::vector<Scalar> alphas;
        for (int i = 0; i < N; ++i) alphas.push_back(random_stable_alpha(rng, ctx));
        ThetaData th = theta_builder(alphas, ctx);
        const Matrix &A = th.node.A, &B = th.node.B, &C = th.node.C, &D = th.node.D;
        Matrix As = conj_star(A);
        // Linear solve vs truncated series.
        Matrix CsC = mat_mul(conj_star(C), C, ctx);
        Matrix series(N, N), ak = Matrix::identity(N);
        for (int n = 0; n < 2000; ++n) {
            Matrix term = mat_mul(conj_star(ak), mat_mul(CsC, ak, ctx), ctx);
            series += term;
            if (frob_norm(term, ctx) < 1e-13) break;
            ak = mat_mul(ak, A, ctx);
        }
        c.expect_near(frob_norm(series - th.G, ctx), 1e-8, "Stein series vs solve");
        c.expect_near(frob_norm(mat_mul(As, mat_mul(th.G, A, ctx), ctx) + CsC - th.G, ctx),
                      1e-8, "Stein identity");
        c.expect_near(frob_norm(mat_mul(conj_star(B), mat_mul(th.G, A, ctx), ctx) +
                                mat_mul(conj_star(D), C, ctx), ctx),
                      1e-8, "cross identity");
        c.expect_near(frob_norm(mat_mul(conj_star(B), mat_mul(th.G, B, ctx), ctx) +
                                mat_mul(conj_star(D), D, ctx) -
                                Matrix::identity(1), ctx),
                      1e-8, "normalization identity");
        for (double x : {-0.3, -0.1, 0.1, 0.3})
            c.expect_near(frob_norm(theta_alt_eval(th, x) - eval(th.node, x), ctx),
                          1e-9, "alternative form mismatch");
        if (N == 1) {
            // the scalar closed form is stated in terms of the state entry A
            const Scalar alpha = conj_star(alphas[0]);
            for (double x : {-0.3, -0.1, 0.1, 0.3}) {
                Scalar lhs = eval(th.node, x)(0, 0);
                Scalar rhs = mul(mul(invert(Scalar::one() - x * alpha, ctx),
                                     Scalar(x) - conj_star(alpha), ctx),
                                 mul(Scalar::one() - alpha,
                                     invert(Scalar::one() - conj_star(alpha), ctx), ctx),
                                 ctx);
                c.expect(approx_equal(lhs, rhs, 1e-10), "closed form for N=1");
            }
        }
    }
    return c;
}

Check criterion_factor_roundtrip() {
    Check c;
    std::mt19937 rng(707);
    AlgebraContext ctx(-1.0);
    Signature J(Matrix::identity(1), ctx);
    for (int trial = 0; trial < 5 && c.ok; ++trial) {
        Scalar alpha, beta;
        do alpha = random_scalar(rng); while (std::abs(2 * alpha.a().real()) < 0.2);
        do beta = random_scalar(rng); while (std::abs(2 * beta.a().real()) < 0.2);
        Node R = node_product(blaschke_line(alpha, ctx).node,
                              blaschke_line(beta, ctx).node);
        Matrix pi(2, 2);
        pi(1, 1) = Scalar::one();
        c.expect(is_supporting_projection(R, pi), "canonical projection not supporting");
        if (!c.ok) break;
        FactorPair fp = factor_from_projection(R, pi);
        auto xs = regular_samples({&R, &fp.R1, &fp.R2});
        for (double x : xs)
            c.expect_near(frob_norm(mat_mul(eval(fp.R1, x), eval(fp.R2, x), ctx) -
                                    eval(R, x), ctx),
                          1e-8, "pointwise product after factorization");
        c.expect(mcmillan_degree(fp.R1) == 1 && mcmillan_degree(fp.R2) == 1 &&
                     mcmillan_degree(R) == 2,
                 "degree additivity 1+1=2");
        Certificate cert = solve_certificate(R, J, CertKind::LineJUnitary);
        auto split = junitary_factor(R, J, cert, {unit_column(2, 0)});
        auto rep1 = verify_certificate(split.R1, J, split.cert1,
                                       default_samples(split.R1, cert.kind));
        auto rep2 = verify_certificate(split.R2, J, split.cert2,
                                       default_samples(split.R2, cert.kind));
        c.expect_near(rep1.max_residual, 1e-8, "left factor re-certification");
        c.expect_near(rep2.max_residual, 1e-8, "right factor re-certification");
        c.expect(mcmillan_degree(split.R1) + mcmillan_degree(split.R2) == 2,
                 "J-unitary split degrees");
    }
    return c;
}

Check criterion_positive_factorization() {
    Check c;
    std::mt19937 rng(808);
    AlgebraContext ctx(-1.0);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        const int N = dim(rng);
        Matrix F(N, N);
        for (int r = 0; r < N; ++r)
            for (int col = 0; col <= r; ++col) F(r, col) = random_scalar(rng);
        Matrix M = mat_mul(F, conj_star(F), ctx);
        Matrix G = positive_factorize(M, ctx);
        c.expect_near(frob_norm(mat_mul(G, conj_star(G), ctx) - M, ctx), 1e-9,
                      "FF^* reconstruction");
        // Push one eigenvalue of the real quadratic form negative.
        Matrix bad = M - (frob_norm(M, ctx) + 1.0) * Matrix::identity(N);
        bool threw = false;
        try {
            positive_factorize(bad, ctx);
        } catch (const NotNonnegative&) {
            threw = true;
        }
        c.expect(threw, "negative case must raise NotNonnegative");
    }
    return c;
}

Check criterion_star_product() {
    Check c;
    std::mt19937 rng(909);
    AlgebraContext ctx(-1.0);
    for (int trial = 0; trial < 3 && c.ok; ++trial) {
        Scalar alpha = random_scalar(rng, 0.5);
        if (std::abs(1.0 - norm_form(alpha, ctx)) < 0.2) continue;
        SeriesHt f = series_from_node(blaschke_circle(alpha, ctx).node, 64);
        SeriesHt g = series_from_node(blaschke_circle(conj_star(alpha), ctx).node, 64);
        SeriesHt h = star_product(f, g, ctx);
        const double re = alpha.a().real();
        const double det = norm_form(alpha, ctx);
        for (int k = 0; k < 20; ++k) {
            Scalar q = random_scalar(rng, 0.25);
            if (std::sqrt(norm_form(q, ctx)) > 0.3) q *= 0.5;
            Scalar q2 = mul(q, q, ctx);
            Scalar num = q2 - 2.0 * re * q + Scalar(det);
            Scalar den = det * q2 - 2.0 * re * q + Scalar::one();
            Scalar closed = mul(num, invert(den, ctx), ctx);
            Scalar viaSeries = star_eval(h, q, ctx);
            c.expect(approx_equal(viaSeries, closed, 1e-6),
                     "star product closed form mismatch");
        }
    }
    return c;
}

Check criterion_nonminimality() {
    Check c;
    std::mt19937 rng(1010);
    AlgebraContext ctx(-1.0);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        Scalar alpha, beta;
        do alpha = random_scalar(rng); while (std::abs(2 * alpha.a().real()) < 0.2);
        do beta = random_scalar(rng); while (std::abs(2 * beta.a().real()) < 0.2);
        Node R = node_product(blaschke_line(alpha, ctx).node,
                              blaschke_line(beta, ctx).node);
        if (!is_minimal(R)) continue;
        Matrix A(3, 3), B(3, 1), C(1, 3);
        A.set_block(0, 0, R.A);
        A(2, 2) = Scalar(u(rng));
        B.set_block(0, 0, R.B);
        C.set_block(0, 0, R.C);
        Node padded(A, B, C, R.D, ctx);
        c.expect(!is_controllable(padded), "padded node must be uncontrollable");
        c.expect(!is_minimal(padded), "padded node must be non-minimal");
        c.expect(mcmillan_degree(padded) == mcmillan_degree(R),
                 "McMillan degree must ignore padding");
    }
    return c;
}

Check criterion_antisym() {
    Check c;
    std::mt19937 rng(1111);
    AlgebraContext ctx(-1.0);
    // Constructor anti-symmetry on samples.
    for (int trial = 0; trial < 5 && c.ok; ++trial) {
        Node psi(random_matrix(rng, 2, 2), random_matrix(rng, 2, 1),
                 random_matrix(rng, 1, 2), random_matrix(rng, 1, 1), ctx);
        Node phiL = make_phi_from_psi(psi, CertKind::LineAntiSym);
        for (double x : {-0.3, -0.15, 0.1, 0.25}) {
            try {
                c.expect_near(frob_norm(eval(phiL, x) + conj_star(eval(phiL, -x)), ctx),
                              1e-9, "line anti-symmetry");
            } catch (const PoleAt&) {
            }
        }
        if (cond_number(embed(psi.A, ctx)) > 1e6) continue;
        Node phiC = make_phi_from_psi(psi, CertKind::CircleAntiSym);
        for (double x : {-0.3, -0.15, 0.1, 0.25}) {
            try {
                c.expect_near(
                    frob_norm(eval(phiC, x) + conj_star(eval(phiC, 1.0 / x)), ctx),
                    1e-9, "circle anti-symmetry");
            } catch (const PoleAt&) {
            }
        }
    }
    // Degenerate line fixture: A = diag(p0, -p0^*), H antidiagonal.
    {
        Scalar p0(Complex(1, 0), Complex(1, 0));
        Matrix A(2, 2), B(2, 1), C(1, 2);
        A(0, 0) = p0;
        A(1, 1) = -conj_star(p0);
        B(0, 0) = B(1, 0) = Scalar::one();
        C(0, 0) = C(0, 1) = Scalar::one();
        Node phi(A, B, C, Matrix(1, 1), ctx);
        Certificate cert = solve_certificate(phi, std::nullopt, CertKind::LineAntiSym);
        int degenerate = 0, other = 0;
        for (const auto& ep : all_eigenpairs(A, ctx)) {
            try {
                additive_decomposition(phi, cert, {ep.f});
                ++other;
            } catch (const DegenerateSubspace&) {
                ++degenerate;
            }
        }
        c.expect(degenerate == 4 && other == 0,
                 "line fixture must reject all eigen-subspaces");
    }
    // Degenerate circle fixture: A = diag(p1, p1^{-*}), p1 p1^* != 1.
    {
        Scalar p1(Complex(1, 0), Complex(1, 0));
        Scalar p1is = invert(conj_star(p1), ctx);
        Matrix A(2, 2), B(2, 1), C(1, 2);
        A(0, 0) = p1;
        A(1, 1) = p1is;
        B(0, 0) = B(1, 0) = Scalar::one();
        C(0, 0) = p1;
        C(0, 1) = p1is;
        Node phi(A, B, C, Matrix::identity(1), ctx);
        Certificate cert = solve_certificate(phi, std::nullopt, CertKind::CircleAntiSym);
        int degenerate = 0, other = 0;
        for (const auto& ep : all_eigenpairs(A, ctx)) {
            try {
                additive_decomposition(phi, cert, {ep.f});
                ++other;
            } catch (const DegenerateSubspace&) {
                ++degenerate;
            }
        }
        c.expect(degenerate == 4 && other == 0,
                 "circle fixture must reject all eigen-subspaces");
    }
    return c;
}

} // namespace

std::vector<CriterionResult> run_selftest(const std::string& filter) {
    struct Entry {
        const char* name;
        std::function<Check()> fn;
    };
    const Entry entries[] = {
        {"quaternion-sanity", criterion_quaternion_sanity},
        {"embedding-oracle", criterion_embedding_oracle},
        {"line-blaschke", criterion_line_blaschke},
        {"circle-blaschke", criterion_circle_blaschke},
        {"kernel-identities", criterion_kernel_identities},
        {"theta-stein", criterion_theta_stein},
        {"factor-roundtrip", criterion_factor_roundtrip},
        {"positive-factorization", criterion_positive_factorization},
        {"star-product", criterion_star_product},
        {"nonminimality", criterion_nonminimality},
        {"antisym-constructors", criterion_antisym},
    };
    std::vector<CriterionResult> out;
    double total = 0.0;
    for (const auto& e : entries) {
        if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos)
            continue;
        CriterionResult r;
        r.name = e.name;
        const auto start = Clock::now();
        try {
            Check c = e.fn();
            r.passed = c.ok;
            r.detail = c.ok ? "ok" : c.why.str();
        } catch (const Error& err) {
            r.passed = false;
            r.detail = std::string("error: ") + err.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        total += r.seconds;
        out.push_back(std::move(r));
    }
    if (filter.empty() || std::string("runtime").find(filter) != std::string::npos) {
        CriterionResult r;
        r.name = "runtime";
        r.passed = total < 60.0;
        std::ostringstream ss;
        ss << "total " << total << " s";
        r.detail = ss.str();
        r.seconds = total;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace ht
