#include "ht/structured.hpp"

#include <cmath>

namespace ht {

Signature::Signature(Matrix j, const AlgebraContext& ctx, double tol) : J(std::move(j)) {
    if (J.rows() != J.cols()) throw SizeMismatch("Signature: not square");
    const double scale = 1.0 + frob_norm(J, ctx);
    if (frob_norm(J - conj_star(J), ctx) > tol * scale ||
        frob_norm(mat_mul(J, J, ctx) - Matrix::identity(J.rows()), ctx) > tol * scale)
        throw PreconditionViolated("Signature: J = J^* = J^{-1} violated");
}

const char* kind_name(CertKind kind) {
    switch (kind) {
        case CertKind::LineJUnitary: return "line-junitary";
        case CertKind::CircleJUnitary: return "circle-junitary";
        case CertKind::LineAntiSym: return "line-antisym";
        case CertKind::CircleAntiSym: return "circle-antisym";
    }
    return "?";
}

bool is_line_kind(CertKind kind) {
    return kind == CertKind::LineJUnitary || kind == CertKind::LineAntiSym;
}

bool is_junitary_kind(CertKind kind) {
    return kind == CertKind::LineJUnitary || kind == CertKind::CircleJUnitary;
}

namespace {

// Real basis of the *-symmetric N x N matrices: one unit per diagonal entry
// (real), four per off-diagonal pair.
std::vector<Matrix> symmetric_basis(int n) {
    std::vector<Matrix> basis;
    for (int i = 0; i < n; ++i) {
        Matrix m(n, n);
        m(i, i) = Scalar::one();
        basis.push_back(m);
    }
    const Scalar units[4] = {Scalar::one(), Scalar::i(), Scalar::j(), Scalar::k()};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (const auto& u : units) {
                Matrix m(n, n);
                m(i, j) = u;
                m(j, i) = conj_star(u);
                basis.push_back(m);
            }
    return basis;
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

struct CertEquations {
    std::vector<std::pair<std::string, Matrix>> linear;   // H-dependent
    std::vector<std::pair<std::string, Matrix>> constant; // H-free
};

CertEquations cert_equations(const Node& node, const Matrix* J, CertKind kind,
                             const Matrix& H) {
    const auto& ctx = node.ctx;
    const Matrix &A = node.A, &B = node.B, &C = node.C, &D = node.D;
    Matrix As = conj_star(A), Bs = conj_star(B), Cs = conj_star(C), Ds = conj_star(D);
    CertEquations eq;
    switch (kind) {
        case CertKind::LineJUnitary: {
            Matrix CJC = mat_mul(Cs, mat_mul(*J, C, ctx), ctx);
            eq.linear.emplace_back("lyapunov",
                mat_mul(As, H, ctx) + mat_mul(H, A, ctx) + CJC);
            eq.linear.emplace_back("coupling",
                mat_mul(H, B, ctx) + mat_mul(Cs, mat_mul(*J, D, ctx), ctx));
            eq.constant.emplace_back("signature",
                mat_mul(D, mat_mul(*J, Ds, ctx), ctx) - *J);
            break;
        }
        case CertKind::CircleJUnitary: {
            eq.linear.emplace_back("stein",
                mat_mul(As, mat_mul(H, A, ctx), ctx) - H +
                mat_mul(Cs, mat_mul(*J, C, ctx), ctx));
            eq.linear.emplace_back("coupling",
                mat_mul(As, mat_mul(H, B, ctx), ctx) +
                mat_mul(Cs, mat_mul(*J, D, ctx), ctx));
            eq.linear.emplace_back("signature",
                mat_mul(Bs, mat_mul(H, B, ctx), ctx) +
                mat_mul(Ds, mat_mul(*J, D, ctx), ctx) - *J);
            break;
        }
        case CertKind::LineAntiSym: {
            eq.linear.emplace_back("lyapunov",
                mat_mul(As, H, ctx) + mat_mul(H, A, ctx));
            eq.linear.emplace_back("coupling", mat_mul(H, B, ctx) - Cs);
            eq.constant.emplace_back("skew", D + Ds);
            break;
        }
        case CertKind::CircleAntiSym: {
            eq.linear.emplace_back("stein",
                mat_mul(As, mat_mul(H, A, ctx), ctx) - H);
            eq.linear.emplace_back("coupling",
                mat_mul(As, mat_mul(H, B, ctx), ctx) - Cs);
            eq.linear.emplace_back("skew",
                mat_mul(Bs, mat_mul(H, B, ctx), ctx) - (D + Ds));
            break;
        }
    }
    return eq;
}

Eigen::VectorXd stack_equations(const CertEquations& eq, bool include_constant) {
    Eigen::Index total = 0;
    for (const auto& [label, m] : eq.linear) total += 4 * m.rows() * m.cols();
    if (include_constant)
        for (const auto& [label, m] : eq.constant) total += 4 * m.rows() * m.cols();
    Eigen::VectorXd v(total);
    Eigen::Index at = 0;
    auto push = [&](const Matrix& m) {
        Eigen::VectorXd part = mat_to_real(m);
        v.segment(at, part.size()) = part;
        at += part.size();
    };
    for (const auto& [label, m] : eq.linear) push(m);
    if (include_constant)
        for (const auto& [label, m] : eq.constant) push(m);
    return v;
}

double inputs_scale(const Node& node, const Matrix* J) {
    const auto& ctx = node.ctx;
    double s = 1.0 + frob_norm(node.A, ctx) + frob_norm(node.B, ctx) +
               frob_norm(node.C, ctx) + frob_norm(node.D, ctx);
    if (J) s += frob_norm(*J, ctx);
    return s;
}

} // namespace

Certificate solve_certificate(const Node& node, const std::optional<Signature>& J,
                              CertKind kind, double tol) {
    const auto& ctx = node.ctx;
    const int N = node.state_dim();
    if (is_junitary_kind(kind) && !J)
        throw KindMismatch("solve_certificate: signature J required for this kind");
    const Matrix* Jm = J ? &J->J : nullptr;
    if (Jm && (Jm->rows() != node.out_dim() || node.out_dim() != node.in_dim()))
        throw SizeMismatch("solve_certificate: J vs node value size");
    if (!is_minimal(node)) throw NotMinimal("solve_certificate");
    if (!is_line_kind(kind) && N > 0 &&
        cond_number(embed(node.A, ctx)) > 1e10)
        throw AInvertibilityRequired("solve_certificate: circle kind needs A invertible");
    if (kind == CertKind::LineJUnitary &&
        cond_number(embed(node.D, ctx)) > 1e10)
        throw DNotInvertible("solve_certificate: line J-unitary needs D invertible");

    const double scale = inputs_scale(node, Jm);
    Certificate cert{Matrix(N, N), kind, {}};
    if (N > 0) {
        auto basis = symmetric_basis(N);
        Matrix zero(N, N);
        Eigen::VectorXd r0 = stack_equations(cert_equations(node, Jm, kind, zero), false);
        Eigen::MatrixXd L(r0.size(), static_cast<Eigen::Index>(basis.size()));
        for (size_t k = 0; k < basis.size(); ++k)
            L.col(static_cast<Eigen::Index>(k)) =
                stack_equations(cert_equations(node, Jm, kind, basis[k]), false) - r0;
        Eigen::VectorXd h = L.colPivHouseholderQr().solve(-r0);
        Matrix H(N, N);
        for (size_t k = 0; k < basis.size(); ++k) H += h(static_cast<Eigen::Index>(k)) * basis[k];
        cert.H = H;
    }
    auto eq = cert_equations(node, Jm, kind, cert.H);
    double worst = 0.0;
    for (const auto& [label, m] : eq.linear) {
        const double r = frob_norm(m, ctx);
        cert.residuals.emplace_back(label, r);
        worst = std::max(worst, r);
    }
    for (const auto& [label, m] : eq.constant) {
        const double r = frob_norm(m, ctx);
        cert.residuals.emplace_back(label, r);
        worst = std::max(worst, r);
    }
    if (worst > tol * scale)
        throw NotInClass(std::string("solve_certificate: ") + kind_name(kind) +
                         " residual " + std::to_string(worst));
    if (N > 0 && cond_number(embed(cert.H, ctx)) > 1e10)
        throw NotInClass("solve_certificate: H not invertible");
    return cert;
}

std::vector<double> default_samples(const Node& node, CertKind kind) {
    static const double grid[] = {-0.35, -0.3, -0.2, -0.1, -0.05,
                                  0.05, 0.1, 0.2, 0.3, 0.35};
    std::vector<double> out;
    const auto& ctx = node.ctx;
    for (double x : grid) {
        bool ok = true;
        if (node.state_dim() > 0) {
            Matrix m = Matrix::identity(node.state_dim()) - x * node.A;
            ok = cond_number(embed(m, ctx)) < 1e8;
            if (ok && !is_line_kind(kind)) {
                Matrix m2 =
                    Matrix::identity(node.state_dim()) - (1.0 / x) * node.A;
                ok = cond_number(embed(m2, ctx)) < 1e8;
            }
        }
        if (ok) out.push_back(x);
    }
    return out;
}

VerifyReport verify_certificate(const Node& node, const std::optional<Signature>& J,
                                const Certificate& cert,
                                const std::vector<double>& sample_xs,
                                double tol) {
    const auto& ctx = node.ctx;
    const CertKind kind = cert.kind;
    if (is_junitary_kind(kind) && !J)
        throw KindMismatch("verify_certificate: signature J required for this kind");
    const Matrix* Jm = J ? &J->J : nullptr;
    if (cert.H.rows() != node.state_dim())
        throw KindMismatch("verify_certificate: certificate size vs node state");

    VerifyReport rep;
    auto add = [&](const std::string& label, double r) {
        rep.entries.emplace_back(label, r);
        rep.max_residual = std::max(rep.max_residual, r);
    };

    // (i) defining functional identity.
    const bool line = is_line_kind(kind);
    for (double x : sample_xs) {
        const double xr = line ? -x : 1.0 / x;
        Matrix Rx, Rr;
        try {
            Rx = eval(node, x);
            Rr = eval(node, xr);
        } catch (const PoleAt&) {
            continue;
        }
        Matrix res = is_junitary_kind(kind)
            ? mat_mul(Rx, mat_mul(*Jm, conj_star(Rr), ctx), ctx) - *Jm
            : Rx + conj_star(Rr);
        add("functional@" + std::to_string(x), frob_norm(res, ctx));
    }

    // (ii) algebraic certificate equations.
    for (const auto& eqset = cert_equations(node, Jm, kind, cert.H);
         const auto& group : {eqset.linear, eqset.constant})
        for (const auto& [label, m] : group) add(label, frob_norm(m, ctx));

    // (iii) kernel identity against C (I-xA)^{-1} H^{-1} (I-yA^*)^{-1} C^*.
    const int N = node.state_dim();
    if (N > 0 && cond_number(embed(cert.H, ctx)) < 1e10) {
        Matrix Hinv = mat_inv(cert.H, ctx);
        int pairs = 0;
        for (double x : sample_xs) {
            for (double y : sample_xs) {
                const double den = line ? x + y : 1.0 - x * y;
                if (std::abs(den) < 0.05) continue;
                Matrix Rx, Ry;
                try {
                    Rx = eval(node, x);
                    Ry = eval(node, y);
                } catch (const PoleAt&) {
                    continue;
                }
                Matrix lhs = is_junitary_kind(kind)
                    ? *Jm - mat_mul(Rx, mat_mul(*Jm, conj_star(Ry), ctx), ctx)
                    : Rx + conj_star(Ry);
                lhs *= 1.0 / den;
                Matrix mx = mat_inv(Matrix::identity(N) - x * node.A, ctx);
                Matrix my = mat_inv(Matrix::identity(N) - y * conj_star(node.A), ctx);
                Matrix rhs = mat_mul(node.C,
                    mat_mul(mx, mat_mul(Hinv, mat_mul(my, conj_star(node.C), ctx), ctx), ctx),
                    ctx);
                add("kernel@(" + std::to_string(x) + "," + std::to_string(y) + ")",
                    frob_norm(lhs - rhs, ctx));
                if (++pairs >= 20) break;
            }
            if (pairs >= 20) break;
        }
    }

    rep.ok = rep.max_residual <= tol * inputs_scale(node, Jm);
    return rep;
}

Node make_phi_from_psi(const Node& psi, CertKind kind) {
    const auto& ctx = psi.ctx;
    const int N = psi.state_dim();
    const bool line = is_line_kind(kind);
    Matrix As = conj_star(psi.A), Bs = conj_star(psi.B), Cs = conj_star(psi.C),
           Ds = conj_star(psi.D);
    Matrix A2(2 * N, 2 * N), B2(2 * N, psi.in_dim()), C2(psi.out_dim(), 2 * N);
    A2.set_block(0, 0, psi.A);
    C2.set_block(0, 0, psi.C);
    B2.set_block(0, 0, psi.B);
    Matrix D2 = psi.D - Ds;
    if (line) {
        A2.set_block(N, N, -As);
        B2.set_block(N, 0, Cs);
        C2.set_block(0, N, Bs);
    } else {
        if (N > 0 && cond_number(embed(psi.A, ctx)) > 1e10)
            throw AInvertibilityRequired("make_phi_from_psi: circle kind needs A invertible");
        Matrix Ainvs = N > 0 ? mat_inv(As, ctx) : Matrix(0, 0);
        A2.set_block(N, N, Ainvs);
        B2.set_block(N, 0, mat_mul(Ainvs, Cs, ctx));
        C2.set_block(0, N, mat_mul(Bs, Ainvs, ctx));
        D2 += mat_mul(Bs, mat_mul(Ainvs, Cs, ctx), ctx);
    }
    return Node(A2, B2, C2, D2, ctx);
}

Node embed_T(const Node& phi_node) {
    if (phi_node.out_dim() != phi_node.in_dim())
        throw SizeMismatch("embed_T: phi must be square-valued");
    const auto& ctx = phi_node.ctx;
    const int N = phi_node.state_dim(), n = phi_node.out_dim();
    Matrix B(N, 2 * n), C(2 * n, N), D = Matrix::identity(2 * n);
    B.set_block(0, n, phi_node.B);
    C.set_block(0, 0, phi_node.C);
    D.set_block(0, n, phi_node.D);
    return Node(phi_node.A, B, C, D, ctx);
}

} // namespace ht
