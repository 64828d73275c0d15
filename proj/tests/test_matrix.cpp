#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ht/matrix.hpp"
#include "test_util.hpp"

using namespace ht;
using test::random_matrix;
using test::rel_err;

TEST_CASE("matrix product matches embedding oracle") {
    std::mt19937 rng(10);
    for (double t : {-1.0, 2.0}) {
        AlgebraContext ctx(t);
        for (int n = 0; n < 20; ++n) {
            Matrix a = random_matrix(rng, 3, 2), b = random_matrix(rng, 2, 4);
            Matrix ab = mat_mul(a, b, ctx);
            CHECK((embed(ab, ctx) - embed(a, ctx) * embed(b, ctx)).norm() < 1e-12);
            CHECK(rel_err(conj_star(ab),
                          mat_mul(conj_star(b), conj_star(a), ctx), ctx) < 1e-12);
        }
        Matrix a = random_matrix(rng, 4, 4);
        CHECK(rel_err(mat_mul(Matrix::identity(4), a, ctx), a, ctx) < 1e-14);
        CHECK_THROWS_AS((void)mat_mul(random_matrix(rng, 2, 3),
                                      random_matrix(rng, 2, 3), ctx),
                        SizeMismatch);
    }
}

TEST_CASE("conj_star involution and adjoint identity") {
    std::mt19937 rng(11);
    AlgebraContext ctx(-0.5);
    CHECK(rel_err(conj_star(Matrix::identity(3)), Matrix::identity(3), ctx) == 0.0);
    Matrix dj(1, 1);
    dj(0, 0) = Scalar::j();
    CHECK(rel_err(conj_star(dj), -dj, ctx) < 1e-14);
    for (int n = 0; n < 30; ++n) {
        Matrix a = random_matrix(rng, 3, 3);
        Matrix p = random_matrix(rng, 3, 1), q = random_matrix(rng, 3, 1);
        CHECK(rel_err(conj_star(conj_star(a)), a, ctx) == 0.0);
        CHECK(vec_bilinear(mat_mul(a, q, ctx), p, ctx) ==
              doctest::Approx(vec_bilinear(q, mat_mul(conj_star(a), p, ctx), ctx)));
    }
}

TEST_CASE("matrix inverse") {
    std::mt19937 rng(12);
    AlgebraContext ctx(-1.0);
    CHECK(rel_err(mat_inv(Matrix::identity(3), ctx), Matrix::identity(3), ctx) <
          1e-13);
    AlgebraContext ctx3(3.0);
    Matrix d(1, 1);
    d(0, 0) = Scalar(2.0) + Scalar::j();
    Matrix di = mat_inv(d, ctx3);
    CHECK(test::scalar_err(di(0, 0), Scalar(2.0) - Scalar::j()) < 1e-12);
    for (int n = 0; n < 20; ++n) {
        Matrix a = random_matrix(rng, 4, 4) + Matrix::identity(4) * 3.0;
        Matrix ai = mat_inv(a, ctx);
        CHECK(rel_err(mat_mul(a, ai, ctx), Matrix::identity(4), ctx) < 1e-9);
        CHECK(rel_err(conj_star(ai), mat_inv(conj_star(a), ctx), ctx) < 1e-9);
    }
    CHECK_THROWS_AS((void)mat_inv(Matrix(2, 2), ctx), Singular);
}

TEST_CASE("weighted form and the H-adjoint") {
    std::mt19937 rng(13);
    AlgebraContext ctx(2.0);
    Matrix e1(2, 1);
    e1(0, 0) = Scalar::one();
    CHECK(vec_bilinear(e1, e1, ctx) == doctest::Approx(2.0));
    FormH id_form(Matrix::identity(2), ctx);
    CHECK(id_form(e1, e1) == doctest::Approx(vec_bilinear(e1, e1, ctx)));
    Matrix h = random_matrix(rng, 3, 3);
    h = h + conj_star(h) + Matrix::identity(3) * 4.0;
    FormH form(h, ctx);
    for (int n = 0; n < 20; ++n) {
        Matrix a = random_matrix(rng, 3, 3);
        Matrix f = random_matrix(rng, 3, 1), g = random_matrix(rng, 3, 1);
        Matrix a_delta =
            mat_mul(mat_inv(h, ctx), mat_mul(conj_star(a), h, ctx), ctx);
        CHECK(form(mat_mul(a, f, ctx), g) ==
              doctest::Approx(form(f, mat_mul(a_delta, g, ctx))));
    }
}

TEST_CASE("real quadratic form of a matrix") {
    AlgebraContext ctx(-1.0);
    Eigen::MatrixXd q = quadratic_form_matrix(Matrix::identity(2), ctx);
    CHECK((q - 2.0 * Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-12);
    CHECK(quadratic_form_matrix(Matrix(2, 2), ctx).norm() == 0.0);
    std::mt19937 rng(14);
    for (int n = 0; n < 10; ++n) {
        Matrix f = random_matrix(rng, 3, 3);
        Matrix m = mat_mul(f, conj_star(f), ctx);
        Eigen::MatrixXd qm = quadratic_form_matrix(m, ctx);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qm);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
}

TEST_CASE("star nonnegativity") {
    AlgebraContext ctx(-1.0);
    CHECK(is_star_nonnegative(Matrix::identity(3), ctx));
    CHECK_FALSE(is_star_nonnegative(-Matrix::identity(3), ctx));
    std::mt19937 rng(15);
    for (int n = 0; n < 10; ++n) {
        Matrix f = random_matrix(rng, 3, 3);
        CHECK(is_star_nonnegative(mat_mul(f, conj_star(f), ctx), ctx));
    }
    CHECK_THROWS_AS((void)is_star_nonnegative(random_matrix(rng, 3, 3), ctx),
                    NotStarSymmetric);
}

TEST_CASE("positive factorization") {
    AlgebraContext ctx(-1.0);
    Matrix f0 = positive_factorize(Matrix::identity(3), ctx);
    CHECK(rel_err(mat_mul(f0, conj_star(f0), ctx), Matrix::identity(3), ctx) <
          1e-12);
    Matrix d(3, 3);
    d(0, 0) = Scalar(4.0);
    Matrix fd = positive_factorize(d, ctx);
    CHECK(rel_err(mat_mul(fd, conj_star(fd), ctx), d, ctx) < 1e-12);
    CHECK(test::scalar_err(fd(0, 0), Scalar(2.0)) < 1e-12);
    std::mt19937 rng(16);
    for (int n = 0; n < 30; ++n) {
        Matrix f = random_matrix(rng, 4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = r + 1; c < 4; ++c) f(r, c) = Scalar();
        Matrix m = mat_mul(f, conj_star(f), ctx);
        Matrix g = positive_factorize(m, ctx);
        CHECK(rel_err(mat_mul(g, conj_star(g), ctx), m, ctx) < 1e-9);
    }
    CHECK_THROWS_AS((void)positive_factorize(-Matrix::identity(2), ctx),
                    NotNonnegative);
}

TEST_CASE("eigenpairs") {
    AlgebraContext ctx(-1.0);
    Matrix d(2, 2);
    d(0, 0) = Scalar(3.0);
    d(1, 1) = Scalar(1.0);
    EigenPair ep = eigenpair(d, ctx);
    CHECK(std::abs(ep.lambda - Complex(3.0, 0.0)) < 1e-10);
    Matrix rot(2, 2);
    rot(0, 1) = Scalar(1.0);
    rot(1, 0) = Scalar(-1.0);
    EigenPair er = eigenpair(rot, ctx);
    CHECK(std::abs(std::abs(er.lambda) - 1.0) < 1e-10);
    CHECK(std::abs(er.lambda.real()) < 1e-10);
    std::mt19937 rng(17);
    for (int n = 0; n < 20; ++n) {
        Matrix a = random_matrix(rng, 4, 4);
        EigenPair e = eigenpair(a, ctx);
        Matrix lam = Matrix::scalar(Scalar(e.lambda, 0.0));
        CHECK(frob_norm(mat_mul(a, e.f, ctx) - mat_mul(e.f, lam, ctx), ctx) < 1e-8);
    }
    // star-symmetric quaternion matrices have real eigenvalues
    for (int n = 0; n < 10; ++n) {
        Matrix a = random_matrix(rng, 3, 3);
        a = a + conj_star(a);
        for (const EigenPair& e : all_eigenpairs(a, ctx))
            CHECK(std::abs(e.lambda.imag()) < 1e-8);
    }
}

TEST_CASE("projections and H-orthogonality") {
    AlgebraContext ctx(-1.0);
    Matrix pi(2, 2);
    pi(1, 1) = Scalar(1.0);
    ProjectionDecomposition pd = projection_ops(pi, ctx);
    REQUIRE(pd.range_basis.size() == 4); // real span of one H_t direction
    REQUIRE(pd.kernel_basis.size() == 4);
    for (const Matrix& v : pd.range_basis) {
        CHECK(v(0, 0).is_zero(1e-12));
        CHECK_FALSE(v(1, 0).is_zero(0.5));
    }
    for (const Matrix& v : pd.kernel_basis) CHECK(v(1, 0).is_zero(1e-12));
    Matrix notp(2, 2);
    notp(0, 1) = Scalar(1.0);
    notp(1, 0) = Scalar(1.0);
    CHECK_THROWS_AS((void)projection_ops(notp, ctx), NotIdempotent);

    Matrix h(2, 2);
    h(0, 1) = Scalar(1.0);
    h(1, 0) = Scalar(1.0);
    FormH form(h, ctx);
    Matrix e1(2, 1);
    e1(0, 0) = Scalar::one();
    CHECK_FALSE(is_h_nondegenerate({e1}, form));
    CHECK(is_h_nondegenerate({e1}, FormH(Matrix::identity(2), ctx)));

    // A M in M implies A^Delta M-perp in M-perp
    std::mt19937 rng(18);
    for (int n = 0; n < 10; ++n) {
        Matrix hh = random_matrix(rng, 2, 2);
        hh = hh + conj_star(hh) + Matrix::identity(2) * 4.0;
        FormH fh(hh, ctx);
        Matrix a(2, 2); // upper triangular: span(e1) invariant
        a(0, 0) = test::random_scalar(rng);
        a(0, 1) = test::random_scalar(rng);
        a(1, 1) = test::random_scalar(rng);
        Matrix a_delta =
            mat_mul(mat_inv(hh, ctx), mat_mul(conj_star(a), hh, ctx), ctx);
        auto perp = module_closure({e1}, ctx);
        auto comp = h_orthogonal_complement(perp, fh);
        for (const Matrix& v : comp) {
            Matrix av = mat_mul(a_delta, v, ctx);
            for (const Matrix& u : perp) CHECK(std::abs(fh(u, av)) < 1e-8);
        }
    }
}

TEST_CASE("kernel positivity assembly") {
    AlgebraContext ctx(-1.0);
    std::vector<std::vector<Matrix>> id(3), neg(3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            id[r].push_back(Matrix::identity(1));
            neg[r].push_back(-Matrix::identity(1));
        }
    CHECK(kernel_positivity_check(id, ctx));
    CHECK_FALSE(kernel_positivity_check(neg, ctx));
}
