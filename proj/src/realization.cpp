#include "ht/realization.hpp"

#include <cmath>

namespace ht {

Node::Node(Matrix a, Matrix b, Matrix c, Matrix d, const AlgebraContext& context)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), ctx(context) {
    const int n = A.rows();
    if (A.cols() != n) throw SizeMismatch("Node: A not square");
    if (B.rows() != n || C.cols() != n) throw SizeMismatch("Node: state dims");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw SizeMismatch("Node: input/output dims");
}

Matrix eval(const Node& node, double x, double tol) {
    if (node.state_dim() == 0 || x == 0.0) return node.D;
    Matrix m = Matrix::identity(node.state_dim()) - x * node.A;
    if (cond_number(embed(m, node.ctx)) > 1.0 / tol)
        throw PoleAt("eval: I - xA singular at x = " + std::to_string(x));
    Matrix inner = mat_mul(mat_mul(node.C, mat_inv(m, node.ctx, tol), node.ctx),
                           node.B, node.ctx);
    return node.D + x * inner;
}

Node node_product(const Node& n1, const Node& n2) {
    if (n1.in_dim() != n2.out_dim()) throw SizeMismatch("node_product");
    const auto& ctx = n1.ctx;
    const int N1 = n1.state_dim(), N2 = n2.state_dim();
    Matrix A(N1 + N2, N1 + N2);
    A.set_block(0, 0, n1.A);
    A.set_block(0, N1, mat_mul(n1.B, n2.C, ctx));
    A.set_block(N1, N1, n2.A);
    Matrix B(N1 + N2, n2.in_dim());
    B.set_block(0, 0, mat_mul(n1.B, n2.D, ctx));
    B.set_block(N1, 0, n2.B);
    Matrix C(n1.out_dim(), N1 + N2);
    C.set_block(0, 0, n1.C);
    C.set_block(0, N1, mat_mul(n1.D, n2.C, ctx));
    return Node(A, B, C, mat_mul(n1.D, n2.D, ctx), ctx);
}

Matrix a_times(const Node& node, double tol) {
    Matrix dinv = [&] {
        try {
            return mat_inv(node.D, node.ctx, tol);
        } catch (const Error&) {
            throw DNotInvertible("a_times: D not invertible");
        }
    }();
    return node.A - mat_mul(mat_mul(node.B, dinv, node.ctx), node.C, node.ctx);
}

Node node_inverse(const Node& node, double tol) {
    Matrix dinv = [&] {
        try {
            return mat_inv(node.D, node.ctx, tol);
        } catch (const Error&) {
            throw DNotInvertible("node_inverse: D not invertible");
        }
    }();
    Matrix ax = node.A - mat_mul(mat_mul(node.B, dinv, node.ctx), node.C, node.ctx);
    return Node(ax, mat_mul(node.B, dinv, node.ctx),
                -mat_mul(dinv, node.C, node.ctx), dinv, node.ctx);
}

Node node_adjoint(const Node& node) {
    return Node(conj_star(node.A), conj_star(node.C), conj_star(node.B),
                conj_star(node.D), node.ctx);
}

namespace {

Eigen::MatrixXcd observability_stack(const Node& node) {
    const auto& ctx = node.ctx;
    Eigen::MatrixXcd a = embed(node.A, ctx);
    Eigen::MatrixXcd c = embed(node.C, ctx);
    const int twoN = static_cast<int>(a.rows());
    Eigen::MatrixXcd stack(static_cast<Eigen::Index>(c.rows()) * twoN, twoN);
    Eigen::MatrixXcd cur = c;
    for (int k = 0; k < twoN; ++k) {
        stack.middleRows(static_cast<Eigen::Index>(k) * c.rows(), c.rows()) = cur;
        cur = cur * a;
    }
    return stack;
}

} // namespace

bool is_observable(const Node& node, double tol) {
    if (node.state_dim() == 0) return true;
    return numeric_rank(observability_stack(node), tol) == 2 * node.state_dim();
}

bool is_controllable(const Node& node, double tol) {
    if (node.state_dim() == 0) return true;
    return is_observable(node_adjoint(node), tol);
}

bool is_minimal(const Node& node, double tol) {
    return is_observable(node, tol) && is_controllable(node, tol);
}

int mcmillan_degree(const Node& node, double tol) {
    const int N = node.state_dim();
    if (N == 0) return 0;
    const auto& ctx = node.ctx;
    Eigen::MatrixXcd a = embed(node.A, ctx);
    Eigen::MatrixXcd b = embed(node.B, ctx);
    Eigen::MatrixXcd c = embed(node.C, ctx);
    // Markov parameters I(C) I(A)^k I(B), k = 0 .. 4N-2, in an (2N)x(2N)
    // block Hankel.
    std::vector<Eigen::MatrixXcd> markov;
    markov.reserve(4 * N - 1);
    Eigen::MatrixXcd ak = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    for (int k = 0; k < 4 * N - 1; ++k) {
        markov.push_back(c * ak * b);
        ak = ak * a;
    }
    const Eigen::Index br = c.rows(), bc = b.cols();
    Eigen::MatrixXcd hankel(br * 2 * N, bc * 2 * N);
    for (int r = 0; r < 2 * N; ++r)
        for (int cidx = 0; cidx < 2 * N; ++cidx)
            hankel.block(r * br, cidx * bc, br, bc) = markov[r + cidx];
    const int rank = numeric_rank(hankel, tol);
    if (rank % 2 != 0)
        throw InternalInconsistency("mcmillan_degree: odd Hankel rank");
    return rank / 2;
}

Matrix similarity_between(const Node& n1, const Node& n2, double tol) {
    if (n1.state_dim() != n2.state_dim() || n1.in_dim() != n2.in_dim() ||
        n1.out_dim() != n2.out_dim())
        throw SizeMismatch("similarity_between");
    const auto& ctx = n1.ctx;
    if (!is_minimal(n1, 1e-10) || !is_minimal(n2, 1e-10))
        throw NotMinimal("similarity_between");
    const int N = n1.state_dim();
    if (N == 0) return Matrix(0, 0);
    // Unknowns: real coordinates of S (4N^2).  Equations: S A1 - A2 S = 0,
    // S B1 = B2, C2 S = C1, all real-linear in S.
    const int nu = 4 * N * N;
    auto s_from = [&](const Eigen::VectorXd& v) {
        Matrix s(N, N);
        for (int c = 0; c < N; ++c) {
            Eigen::VectorXd col = v.segment(static_cast<Eigen::Index>(c) * 4 * N, 4 * N);
            Matrix mc = from_real_vec(col);
            for (int r = 0; r < N; ++r) s(r, c) = mc(r, 0);
        }
        return s;
    };
    auto residual_vec = [&](const Matrix& s) {
        Matrix r1 = mat_mul(s, n1.A, ctx) - mat_mul(n2.A, s, ctx);
        Matrix r2 = mat_mul(s, n1.B, ctx) - n2.B;
        Matrix r3 = mat_mul(n2.C, s, ctx) - n1.C;
        Eigen::VectorXd out(4 * N * N + 4 * N * n1.in_dim() + 4 * N * n1.out_dim());
        Eigen::Index at = 0;
        auto push = [&](const Matrix& m) {
            for (int c = 0; c < m.cols(); ++c) {
                Matrix col = m.block(0, c, m.rows(), 1);
                out.segment(at, 4 * m.rows()) = to_real_vec(col);
                at += 4 * m.rows();
            }
        };
        push(r1);
        push(r2);
        push(r3);
        return out;
    };
    Matrix zero(N, N);
    Eigen::VectorXd rhs = -residual_vec(zero);
    Eigen::MatrixXd lhs(rhs.size(), nu);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nu);
    for (int k = 0; k < nu; ++k) {
        e(k) = 1.0;
        lhs.col(k) = residual_vec(s_from(e)) + rhs;
        e(k) = 0.0;
    }
    Eigen::VectorXd sol = lhs.colPivHouseholderQr().solve(rhs);
    Matrix s = s_from(sol);
    const double scale = 1.0 + frob_norm(n1.A, ctx) + frob_norm(n2.A, ctx) +
                         frob_norm(n1.B, ctx) + frob_norm(n1.C, ctx);
    if (residual_vec(s).norm() > tol * scale)
        throw NotSimilar("similarity_between: no solution within tolerance");
    if (cond_number(embed(s, ctx)) > 1e10)
        throw NotSimilar("similarity_between: solution not invertible");
    return s;
}

std::vector<double> regular_samples(const std::vector<const Node*>& nodes,
                                    int count, double tol) {
    std::vector<double> out;
    for (int k = 0; k < count && static_cast<int>(out.size()) < count; ++k) {
        const double x = -0.4 + 0.8 * k / (count - 1);
        bool ok = true;
        for (const Node* n : nodes) {
            if (n->state_dim() == 0) continue;
            Matrix m = Matrix::identity(n->state_dim()) - x * n->A;
            if (cond_number(embed(m, n->ctx)) > 1.0 / tol) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(x);
    }
    return out;
}

} // namespace ht
