#include "ht/factorization.hpp"

#include <cmath>

namespace ht {

namespace {

Eigen::MatrixXd orthonormal_cols(const std::vector<Matrix>& basis, int n) {
    if (basis.empty()) return Eigen::MatrixXd(4 * n, 0);
    Eigen::MatrixXd m(4 * n, static_cast<Eigen::Index>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c)
        m.col(static_cast<Eigen::Index>(c)) = to_real_vec(basis[c]);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() *
        Eigen::MatrixXd::Identity(4 * n, static_cast<Eigen::Index>(basis.size()));
    return q;
}

// ||(I - P) L P|| / ||L|| for the orthoprojector P onto span(basis).
double invariance_defect(const Eigen::MatrixXd& op, const std::vector<Matrix>& basis,
                         int n) {
    if (basis.empty()) return 0.0;
    Eigen::MatrixXd u = orthonormal_cols(basis, n);
    Eigen::MatrixXd img = op * u;
    Eigen::MatrixXd defect = img - u * (u.transpose() * img);
    const double scale = 1.0 + op.norm();
    return defect.norm() / scale;
}

} // namespace

std::vector<Matrix> module_columns(const std::vector<Matrix>& real_basis,
                                   const AlgebraContext& ctx) {
    if (real_basis.empty()) return {};
    const int n = real_basis[0].rows();
    const size_t dim = real_basis.size();
    if (dim % 4 != 0)
        throw DegenerateSubspace("module_columns: real dimension not divisible by 4");
    const int k = static_cast<int>(dim / 4);
    std::vector<Matrix> picked;
    Eigen::MatrixXcd emb(2 * n, 0);
    for (const auto& cand : real_basis) {
        if (static_cast<int>(picked.size()) == k) break;
        Eigen::MatrixXcd trial(2 * n, emb.cols() + 2);
        trial << emb, embed(cand, ctx);
        if (numeric_rank(trial) == static_cast<int>(trial.cols())) {
            picked.push_back(cand);
            emb = trial;
        }
    }
    if (static_cast<int>(picked.size()) != k)
        throw DegenerateSubspace("module_columns: no free H_t basis for the span");
    return picked;
}

bool is_supporting_projection(const Node& node, const Matrix& pi, double tol) {
    const auto& ctx = node.ctx;
    auto dec = projection_ops(pi, ctx, tol);
    Matrix ax = a_times(node);
    return invariance_defect(real_operator(node.A, ctx), dec.kernel_basis,
                             node.state_dim()) < tol &&
           invariance_defect(real_operator(ax, ctx), dec.range_basis,
                             node.state_dim()) < tol;
}

std::pair<Matrix, Node> normalize_D(const Node& node) {
    Matrix dinv = [&] {
        try {
            return mat_inv(node.D, node.ctx);
        } catch (const Error&) {
            throw DNotInvertible("normalize_D");
        }
    }();
    return {node.D, Node(node.A, node.B, mat_mul(dinv, node.C, node.ctx),
                         Matrix::identity(node.D.rows()), node.ctx)};
}

namespace {

struct AdaptedNode {
    Matrix S, Sinv, A, B, C; // transformed by S
    int N1;                  // leading block size (over H_t)
};

AdaptedNode adapt(const Node& node, const std::vector<Matrix>& first_cols,
                  const std::vector<Matrix>& second_cols) {
    const auto& ctx = node.ctx;
    const int N = node.state_dim();
    Matrix S(N, N);
    int at = 0;
    for (const auto& c : first_cols) S.set_block(0, at++, c);
    for (const auto& c : second_cols) S.set_block(0, at++, c);
    if (at != N) throw DegenerateSubspace("adapt: bases do not fill the space");
    if (cond_number(embed(S, ctx)) > 1e10)
        throw InternalInconsistency("adapt: change of basis ill-conditioned");
    Matrix Sinv = mat_inv(S, ctx);
    return {S, Sinv, mat_mul(Sinv, mat_mul(node.A, S, ctx), ctx),
            mat_mul(Sinv, node.B, ctx), mat_mul(node.C, S, ctx),
            static_cast<int>(first_cols.size())};
}

} // namespace

FactorPair factor_from_projection(const Node& node, const Matrix& pi, double tol) {
    const auto& ctx = node.ctx;
    const int N = node.state_dim();
    if (frob_norm(node.D - Matrix::identity(node.out_dim()), ctx) > tol)
        throw PreconditionViolated("factor_from_projection: D must be I");
    if (!is_minimal(node)) throw NotMinimal("factor_from_projection");
    if (!is_supporting_projection(node, pi, tol))
        throw NotSupporting("factor_from_projection");
    auto dec = projection_ops(pi, ctx, tol);
    auto cols1 = module_columns(dec.kernel_basis, ctx);
    auto cols2 = module_columns(dec.range_basis, ctx);
    auto ad = adapt(node, cols1, cols2);
    const int N1 = ad.N1, N2 = N - N1;
    Node r1(ad.A.block(0, 0, N1, N1), ad.B.block(0, 0, N1, node.in_dim()),
            ad.C.block(0, 0, node.out_dim(), N1), node.D, ctx);
    Node r2(ad.A.block(N1, N1, N2, N2), ad.B.block(N1, 0, N2, node.in_dim()),
            ad.C.block(0, N1, node.out_dim(), N2), node.D, ctx);
    return {r1, r2, dec};
}

CertifiedFactorPair junitary_factor(const Node& node, const Signature& J,
                                    const Certificate& cert,
                                    const std::vector<Matrix>& subspace_basis,
                                    double tol) {
    const auto& ctx = node.ctx;
    const int N = node.state_dim();
    if (!is_junitary_kind(cert.kind))
        throw KindMismatch("junitary_factor: certificate is not J-unitary");
    const bool line = is_line_kind(cert.kind);
    FormH form(cert.H, ctx);

    auto m_basis = module_closure(subspace_basis, ctx);
    if (invariance_defect(real_operator(node.A, ctx), m_basis, N) > tol)
        throw NotInvariant("junitary_factor: subspace not A-invariant");
    if (!is_h_nondegenerate(m_basis, form))
        throw DegenerateSubspace("junitary_factor: subspace H-degenerate");
    if (!line) {
        if (cond_number(embed(node.A, ctx)) > 1e10 ||
            cond_number(embed(Matrix::identity(N) - node.A, ctx)) > 1e10)
            throw CircleInvertibilityRequired("junitary_factor: A, I-A must be invertible");
    } else if (cond_number(embed(node.D, ctx)) > 1e10) {
        throw DNotInvertible("junitary_factor: D must be invertible");
    }
    auto mp_basis = h_orthogonal_complement(m_basis, form);
    if (m_basis.size() + mp_basis.size() != static_cast<size_t>(4 * N))
        throw DegenerateSubspace("junitary_factor: complement dimensions");

    auto cols1 = module_columns(m_basis, ctx);
    auto cols2 = module_columns(mp_basis, ctx);
    auto ad = adapt(node, cols1, cols2);
    const int N1 = ad.N1, N2 = N - N1;
    const int n = node.out_dim();
    const double scale = 1.0 + frob_norm(node.A, ctx);
    if (frob_norm(ad.A.block(N1, 0, N2, N1), ctx) > 1e-7 * scale)
        throw NotInvariant("junitary_factor: adapted A not block triangular");
    Matrix Ht = mat_mul(conj_star(ad.S), mat_mul(cert.H, ad.S, ctx), ctx);
    if (frob_norm(Ht.block(0, N1, N1, N2), ctx) >
        1e-7 * (1.0 + frob_norm(cert.H, ctx)))
        throw InternalInconsistency("junitary_factor: H not block diagonal");
    Matrix H11 = Ht.block(0, 0, N1, N1), H22 = Ht.block(N1, N1, N2, N2);

    Matrix A11 = ad.A.block(0, 0, N1, N1), A22 = ad.A.block(N1, N1, N2, N2);
    Matrix B1 = ad.B.block(0, 0, N1, n), B2 = ad.B.block(N1, 0, N2, n);
    Matrix C1 = ad.C.block(0, 0, n, N1), C2 = ad.C.block(0, N1, n, N2);

    Matrix D1, D2;
    if (line) {
        D1 = node.D;
        D2 = Matrix::identity(n);
    } else {
        D1 = Matrix::identity(n);
        if (N1 > 0) {
            Matrix inner = mat_mul(mat_inv(H11, ctx),
                mat_mul(mat_inv(Matrix::identity(N1) - conj_star(A11), ctx),
                        mat_mul(conj_star(C1), J.J, ctx), ctx), ctx);
            D1 -= mat_mul(C1, inner, ctx);
        }
        D2 = mat_mul(mat_inv(D1, ctx), node.D, ctx);
    }
    Node r1(A11, line ? B1 : mat_mul(B1, mat_inv(D2, ctx), ctx), C1, D1, ctx);
    Node r2(A22, B2, mat_mul(mat_inv(D1, ctx), C2, ctx), D2, ctx);
    return {r1, r2, Certificate{H11, cert.kind, {}}, Certificate{H22, cert.kind, {}},
            ProjectionDecomposition{Matrix(), mp_basis, m_basis}};
}

SummandPair additive_decomposition(const Node& phi_node, const Certificate& cert,
                                   const std::vector<Matrix>& subspace_basis,
                                   double tol) {
    const auto& ctx = phi_node.ctx;
    if (is_junitary_kind(cert.kind))
        throw KindMismatch("additive_decomposition: anti-symmetric certificate required");
    const bool line = is_line_kind(cert.kind);
    const int n = phi_node.out_dim();
    Node T = embed_T(phi_node);
    Matrix Jm(2 * n, 2 * n);
    Jm.set_block(0, n, Matrix::identity(n));
    Jm.set_block(n, 0, Matrix::identity(n));
    Certificate certT{-cert.H,
                      line ? CertKind::LineJUnitary : CertKind::CircleJUnitary,
                      {}};
    auto pair = junitary_factor(T, Signature(Jm, ctx), certT, subspace_basis, tol);

    auto extract = [&](const Node& ti, const Certificate& ci) {
        Matrix Bi = ti.B.block(0, n, ti.state_dim(), n);
        Matrix Ci = ti.C.block(0, 0, n, ti.state_dim());
        Matrix di = ti.D.block(0, n, n, n);
        const double stray =
            frob_norm(ti.B.block(0, 0, ti.state_dim(), n), ctx) +
            frob_norm(ti.C.block(n, 0, n, ti.state_dim()), ctx) +
            frob_norm(ti.D.block(n, 0, n, n), ctx) +
            frob_norm(ti.D.block(0, 0, n, n) - Matrix::identity(n), ctx) +
            frob_norm(ti.D.block(n, n, n, n) - Matrix::identity(n), ctx);
        if (stray > 1e-7 * (1.0 + frob_norm(ti.D, ctx)))
            throw InternalInconsistency("additive_decomposition: factor not unipotent");
        return std::pair{Node(ti.A, Bi, Ci, di, ctx), Certificate{-ci.H, cert.kind, {}}};
    };
    auto [p1, c1] = extract(pair.R1, pair.cert1);
    auto [p2, c2] = extract(pair.R2, pair.cert2);

    // Constant-part convention: the skew share of the constant goes to the
    // first summand.
    Matrix d1 = p1.D, d2 = p2.D;
    if (line) {
        d1 += d2;
        d2 = Matrix(n, n);
    } else {
        Matrix skew2 = 0.5 * (d2 - conj_star(d2));
        d1 += skew2;
        d2 -= skew2;
    }
    return {Node(p1.A, p1.B, p1.C, d1, ctx), Node(p2.A, p2.B, p2.C, d2, ctx),
            c1, c2};
}

} // namespace ht
