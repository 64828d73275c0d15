#include "ht/constructors.hpp"

#include <cmath>

namespace ht {

SeriesHt series_add(const SeriesHt& f, const SeriesHt& g) {
    const size_t n = std::min(f.coeff.size(), g.coeff.size());
    SeriesHt h;
    h.coeff.resize(n);
    for (size_t k = 0; k < n; ++k) h.coeff[k] = f.coeff[k] + g.coeff[k];
    return h;
}

SeriesHt star_product(const SeriesHt& f, const SeriesHt& g, const AlgebraContext& ctx) {
    // Full Cauchy product of the truncations.
    if (f.coeff.empty() || g.coeff.empty()) return SeriesHt{};
    SeriesHt h;
    h.coeff.resize(f.coeff.size() + g.coeff.size() - 1);
    for (size_t k = 0; k < f.coeff.size(); ++k)
        for (size_t m = 0; m < g.coeff.size(); ++m)
            h.coeff[k + m] += mul(f.coeff[k], g.coeff[m], ctx);
    return h;
}

Scalar star_eval(const SeriesHt& f, const Scalar& q, const AlgebraContext& ctx) {
    Scalar acc, qp = Scalar::one();
    for (const auto& c : f.coeff) {
        acc += mul(c, qp, ctx);
        qp = mul(qp, q, ctx);
    }
    return acc;
}

SeriesHt series_from_node(const Node& node, int order) {
    if (node.out_dim() != 1 || node.in_dim() != 1)
        throw SizeMismatch("series_from_node: scalar-valued nodes only");
    const auto& ctx = node.ctx;
    SeriesHt f;
    f.coeff.resize(static_cast<size_t>(order) + 1);
    f.coeff[0] = node.D(0, 0);
    if (node.state_dim() == 0) return f;
    Matrix akb = node.B;
    for (int n = 1; n <= order; ++n) {
        f.coeff[static_cast<size_t>(n)] = mat_mul(node.C, akb, ctx)(0, 0);
        akb = mat_mul(node.A, akb, ctx);
    }
    return f;
}

CertifiedNode blaschke_line(const Scalar& alpha, const AlgebraContext& ctx) {
    Scalar trace = alpha + conj_star(alpha); // real scalar 2 Re(alpha)
    if (trace.is_zero(kDefaultTol))
        throw DegenerateAlpha("blaschke_line: alpha + alpha^* = 0");
    const double s = trace.a().real();
    Node node(Matrix::scalar(alpha), Matrix::scalar(trace),
              Matrix::identity(1), Matrix::identity(1), ctx);
    return {node, Certificate{Matrix::scalar(Scalar(-1.0 / s)),
                              CertKind::LineJUnitary, {}}};
}

SignedCertifiedNode blaschke_line_pair(const Scalar& alpha, const Scalar& beta,
                                       const AlgebraContext& ctx) {
    Scalar mix = alpha + conj_star(beta);
    if (mix.is_zero(kDefaultTol))
        throw DegeneratePair("blaschke_line_pair: alpha + beta^* = 0");
    Matrix A(2, 2), B(2, 2), C(2, 2), H(2, 2), J(2, 2);
    A(0, 0) = alpha;
    A(1, 1) = beta;
    C(0, 0) = mix;
    C(1, 1) = Scalar::one();
    B(0, 0) = Scalar::one();
    B(1, 1) = conj_star(alpha) + beta;
    H(0, 1) = Scalar::one();
    H(1, 0) = Scalar::one();
    J = -H;
    Node node(A, B, C, Matrix::identity(2), ctx);
    return {node, Certificate{H, CertKind::LineJUnitary, {}}, Signature(J, ctx)};
}

SignedCertifiedNode brune_section(const Scalar& alpha, const Scalar& beta,
                                  const Scalar& gamma, double h,
                                  const AlgebraContext& ctx) {
    if (h == 0.0) throw PreconditionViolated("brune_section: h must be nonzero");
    if (!approx_equal(conj_star(alpha), -alpha) || alpha.is_zero(kDefaultTol))
        throw PreconditionViolated("brune_section: alpha = -alpha^* != 0 required");
    const double nb = norm_form(beta, ctx), ng = norm_form(gamma, ctx);
    if (std::abs(nb - ng) > kDefaultTol || std::abs(nb) <= kDefaultTol)
        throw PreconditionViolated("brune_section: beta beta^* = gamma gamma^* != 0 required");
    Matrix C(2, 1), B(1, 2), J(2, 2);
    C(0, 0) = beta;
    C(1, 0) = gamma;
    B(0, 0) = conj_star(beta) * (-1.0 / h);
    B(0, 1) = conj_star(gamma) * (1.0 / h);
    J(0, 0) = Scalar::one();
    J(1, 1) = -Scalar::one();
    Node node(Matrix::scalar(alpha), B, C, Matrix::identity(2), ctx);
    return {node, Certificate{Matrix::scalar(Scalar(h)), CertKind::LineJUnitary, {}},
            Signature(J, ctx)};
}

CertifiedNode blaschke_circle(const Scalar& alpha, const AlgebraContext& ctx) {
    const double h = 1.0 - norm_form(alpha, ctx);
    if (std::abs(h) <= kDefaultTol)
        throw UnimodularAlpha("blaschke_circle: alpha alpha^* = 1");
    Node node(Matrix::scalar(conj_star(alpha)), Matrix::identity(1),
              Matrix::scalar(Scalar(h)), Matrix::scalar(-alpha), ctx);
    return {node, Certificate{Matrix::scalar(Scalar(h)),
                              CertKind::CircleJUnitary, {}}};
}

namespace {

double spectral_radius(const Matrix& a, const AlgebraContext& ctx) {
    if (a.rows() == 0) return 0.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(embed(a, ctx), false);
    if (es.info() != Eigen::Success) throw EigenFailure("spectral_radius");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd mat_to_real(const Matrix& m) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(4) * m.rows() * m.cols());
    Eigen::Index at = 0;
    for (int c = 0; c < m.cols(); ++c) {
        v.segment(at, 4 * m.rows()) = to_real_vec(m.block(0, c, m.rows(), 1));
        at += 4 * m.rows();
    }
    return v;
}

Matrix real_to_mat(const Eigen::VectorXd& v, int rows, int cols) {
    Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c) {
        Matrix col = from_real_vec(v.segment(static_cast<Eigen::Index>(c) * 4 * rows, 4 * rows));
        m.set_block(0, c, col);
    }
    return m;
}

} // namespace

GramStein stein_solve(const Matrix& A, const Matrix& C, const AlgebraContext& ctx,
                      double tol) {
    const int N = A.rows();
    if (A.cols() != N || C.cols() != N) throw SizeMismatch("stein_solve");
    if (spectral_radius(A, ctx) >= 1.0 - 1e-6)
        throw SpectralRadiusTooLarge("stein_solve: rho(A) too close to 1");
    Matrix As = conj_star(A);
    Matrix CsC = mat_mul(conj_star(C), C, ctx);
    const int nu = 4 * N * N;
    auto op = [&](const Matrix& g) { return g - mat_mul(As, mat_mul(g, A, ctx), ctx); };
    Eigen::MatrixXd L(nu, nu);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nu);
    for (int k = 0; k < nu; ++k) {
        e(k) = 1.0;
        L.col(k) = mat_to_real(op(real_to_mat(e, N, N)));
        e(k) = 0.0;
    }
    Eigen::VectorXd g = L.colPivHouseholderQr().solve(mat_to_real(CsC));
    Matrix G = real_to_mat(g, N, N);
    G = 0.5 * (G + conj_star(G));
    // Independent series check against sum A^{*n} C^* C A^n.
    Matrix series(N, N), term = CsC;
    Matrix ak = Matrix::identity(N);
    for (int n = 0; n < 100000; ++n) {
        series += term;
        ak = mat_mul(ak, A, ctx);
        term = mat_mul(conj_star(ak), mat_mul(CsC, ak, ctx), ctx);
        if (frob_norm(term, ctx) < tol) break;
    }
    if (frob_norm(series + term - G, ctx) > 1e-7 * (1.0 + frob_norm(G, ctx)))
        throw InternalInconsistency("stein_solve: series disagrees with linear solve");
    return {G};
}

ThetaData theta_builder(const std::vector<Scalar>& alphas, const AlgebraContext& ctx) {
    const int N = static_cast<int>(alphas.size());
    Matrix A(N, N), C(1, N);
    for (int i = 0; i < N; ++i) {
        A(i, i) = conj_star(alphas[i]);
        C(0, i) = Scalar::one();
    }
    GramStein gs = stein_solve(A, C, ctx);
    if (cond_number(embed(gs.G, ctx)) > 1e10)
        throw GramSingular("theta_builder");
    Matrix Ginv = mat_inv(gs.G, ctx);
    Matrix I = Matrix::identity(N);
    Matrix right = mat_mul(Ginv,
        mat_mul(mat_inv(I - conj_star(A), ctx), conj_star(C), ctx), ctx);
    Matrix B = mat_mul(I - A, right, ctx);
    Matrix D = Matrix::identity(1) - mat_mul(C, right, ctx);
    Node node(A, B, C, D, ctx);
    return {node, Certificate{gs.G, CertKind::CircleJUnitary, {}}, gs.G};
}

Matrix theta_alt_eval(const ThetaData& theta, double x) {
    const auto& node = theta.node;
    const auto& ctx = node.ctx;
    const int N = node.state_dim();
    Matrix I = Matrix::identity(N);
    Matrix m = mat_mul(node.C, mat_mul(mat_inv(I - x * node.A, ctx),
        mat_mul(mat_inv(theta.G, ctx),
            mat_mul(mat_inv(I - conj_star(node.A), ctx), conj_star(node.C), ctx),
            ctx), ctx), ctx);
    return Matrix::identity(1) - (1.0 - x) * m;
}

} // namespace ht
