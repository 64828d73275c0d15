#include "ht/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ht {

std::ostream& operator<<(std::ostream& os, const Scalar& q) {
    auto x = q.quadruple();
    os << "[" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << "]";
    return os;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar::one();
    return m;
}

Matrix Matrix::operator-() const {
    Matrix m(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = -e_[i];
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw SizeMismatch("matrix add");
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw SizeMismatch("matrix sub");
    for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (auto& q : e_) q *= s;
    return *this;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
    Matrix m(nr, nc);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
    return m;
}

void Matrix::set_block(int r0, int c0, const Matrix& sub) {
    for (int r = 0; r < sub.rows(); ++r)
        for (int c = 0; c < sub.cols(); ++c) (*this)(r0 + r, c0 + c) = sub(r, c);
}

Matrix conj_star(const Matrix& a) {
    Matrix m(a.cols(), a.rows());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) m(c, r) = conj_star(a(r, c));
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const AlgebraContext& ctx) {
    if (a.cols() != b.rows()) throw SizeMismatch("matrix product");
    Matrix m(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) {
            Scalar s;
            for (int k = 0; k < a.cols(); ++k) s += mul(a(r, k), b(k, c), ctx);
            m(r, c) = s;
        }
    return m;
}

Eigen::MatrixXcd embed(const Matrix& a, const AlgebraContext& ctx) {
    Eigen::MatrixXcd m(2 * a.rows(), 2 * a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            m.block<2, 2>(2 * r, 2 * c) = embed(a(r, c), ctx);
    return m;
}

Matrix unembed(const Eigen::MatrixXcd& m, const AlgebraContext& ctx, double tol) {
    if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
        throw NotStructured("unembed: odd dimensions");
    Matrix a(static_cast<int>(m.rows() / 2), static_cast<int>(m.cols() / 2));
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            a(r, c) = unembed(Embedded2x2(m.block<2, 2>(2 * r, 2 * c)), ctx, tol);
    return a;
}

double cond_number(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    const double cutoff = rel_tol * s.maxCoeff();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++rank;
    return rank;
}

Matrix mat_inv(const Matrix& a, const AlgebraContext& ctx, double tol) {
    if (a.rows() != a.cols()) throw SizeMismatch("mat_inv: not square");
    if (a.rows() == 0) return a;
    Eigen::MatrixXcd m = embed(a, ctx);
    if (cond_number(m) > 1.0 / tol) throw Singular("mat_inv: embedding singular");
    Eigen::MatrixXcd inv = m.inverse();
    // The inverse of a structured block matrix is structured; a loose
    // tolerance here only guards against numerical blowup.
    return unembed(inv, ctx, 1e-6);
}

double frob_norm(const Matrix& a, const AlgebraContext& ctx) {
    if (a.empty()) return 0.0;
    return embed(a, ctx).norm();
}

bool is_star_symmetric(const Matrix& a, const AlgebraContext& ctx, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = 1.0 + frob_norm(a, ctx);
    return frob_norm(a - conj_star(a), ctx) <= tol * scale;
}

double vec_bilinear(const Matrix& f, const Matrix& g, const AlgebraContext& ctx) {
    if (f.rows() != g.rows() || f.cols() != 1 || g.cols() != 1)
        throw SizeMismatch("vec_bilinear: column sizes");
    double s = 0.0;
    for (int i = 0; i < f.rows(); ++i) s += bilinear(f(i, 0), g(i, 0), ctx);
    return s;
}

FormH::FormH(Matrix h, const AlgebraContext& c, double tol) : H(std::move(h)), ctx(c) {
    if (H.rows() != H.cols()) throw SizeMismatch("FormH: H not square");
    if (!is_star_symmetric(H, ctx, tol)) throw NotStarSymmetric("FormH");
    if (cond_number(embed(H, ctx)) > 1e12) throw Singular("FormH: H badly conditioned");
}

double FormH::operator()(const Matrix& f, const Matrix& g) const {
    return vec_bilinear(f, mat_mul(H, g, ctx), ctx);
}

Eigen::VectorXd to_real_vec(const Matrix& col) {
    if (col.cols() != 1) throw SizeMismatch("to_real_vec: not a column");
    Eigen::VectorXd v(4 * col.rows());
    for (int i = 0; i < col.rows(); ++i) {
        auto x = col(i, 0).quadruple();
        for (int k = 0; k < 4; ++k) v(4 * i + k) = x[k];
    }
    return v;
}

Matrix from_real_vec(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size() / 4);
    Matrix col(n, 1);
    for (int i = 0; i < n; ++i)
        col(i, 0) = Scalar::from_quadruple({v(4 * i), v(4 * i + 1), v(4 * i + 2), v(4 * i + 3)});
    return col;
}

Eigen::MatrixXd real_operator(const Matrix& a, const AlgebraContext& ctx) {
    const int n = a.cols();
    Eigen::MatrixXd m(4 * a.rows(), 4 * n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(4 * n);
    for (int k = 0; k < 4 * n; ++k) {
        e(k) = 1.0;
        m.col(k) = to_real_vec(mat_mul(a, from_real_vec(e), ctx));
        e(k) = 0.0;
    }
    return m;
}

Eigen::MatrixXd bilinear_gram(int n, const AlgebraContext& ctx) {
    Eigen::VectorXd d(4 * n);
    for (int i = 0; i < n; ++i) {
        d(4 * i) = 2.0;
        d(4 * i + 1) = 2.0;
        d(4 * i + 2) = -2.0 * ctx.t;
        d(4 * i + 3) = -2.0 * ctx.t;
    }
    return d.asDiagonal();
}

Eigen::MatrixXd quadratic_form_matrix(const Matrix& m, const AlgebraContext& ctx) {
    if (m.rows() != m.cols()) throw SizeMismatch("quadratic_form_matrix");
    const int n = m.rows();
    // [p, Mp] = p_real^T G R(M) p_real, symmetrized.
    Eigen::MatrixXd q = bilinear_gram(n, ctx) * real_operator(m, ctx);
    return 0.5 * (q + q.transpose());
}

bool is_star_nonnegative(const Matrix& m, const AlgebraContext& ctx, double tol) {
    if (!is_star_symmetric(m, ctx, std::max(tol, kDefaultTol)))
        throw NotStarSymmetric("is_star_nonnegative");
    Eigen::MatrixXd q = quadratic_form_matrix(m, ctx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    const double scale = 1.0 + q.cwiseAbs().maxCoeff();
    return es.eigenvalues().minCoeff() >= -tol * scale;
}

Matrix positive_factorize(const Matrix& m, const AlgebraContext& ctx, double tol) {
    if (ctx.t >= 0) throw PreconditionViolated("positive_factorize: requires t < 0");
    if (!is_star_symmetric(m, ctx, std::max(tol, kDefaultTol)))
        throw NotStarSymmetric("positive_factorize");
    const int n = m.rows();
    const double scale = 1.0 + frob_norm(m, ctx);
    Matrix w = m;
    Matrix f(n, n);
    for (int k = 0; k < n; ++k) {
        const Scalar& dkk = w(k, k);
        if (std::abs(dkk.a().imag()) > tol * scale || std::abs(dkk.b()) > tol * scale)
            throw NotStarSymmetric("positive_factorize: non-real pivot");
        const double d = dkk.a().real();
        if (d < -tol * scale) throw NotNonnegative("positive_factorize: negative pivot");
        if (d <= tol * scale) {
            // Zero pivot: the whole pivot row must vanish (Step-1 scan).
            for (int c = k; c < n; ++c)
                if (!w(k, c).is_zero(tol * scale))
                    throw NotNonnegative("positive_factorize: zero pivot, nonzero row");
            continue;
        }
        const double s = std::sqrt(d);
        for (int r = k; r < n; ++r) f(r, k) = w(r, k) * (1.0 / s);
        // Schur complement update on the trailing block.
        for (int r = k + 1; r < n; ++r)
            for (int c = k + 1; c < n; ++c)
                w(r, c) -= mul(f(r, k), conj_star(f(c, k)), ctx);
    }
    return f;
}

namespace {

// Deterministic eigenvalue order: modulus desc, then Re desc, then Im desc.
bool eig_less(const Complex& x, const Complex& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
}

EigenPair pair_from(const Eigen::VectorXcd& u, Complex lambda) {
    const int n = static_cast<int>(u.size() / 2);
    Matrix f(n, 1);
    for (int i = 0; i < n; ++i)
        f(i, 0) = Scalar(u(2 * i), std::conj(u(2 * i + 1)));
    return {f, lambda};
}

} // namespace

std::vector<EigenPair> all_eigenpairs(const Matrix& a, const AlgebraContext& ctx) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(embed(a, ctx));
    if (es.info() != Eigen::Success) throw EigenFailure();
    std::vector<int> idx(es.eigenvalues().size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        return eig_less(es.eigenvalues()(i), es.eigenvalues()(j));
    });
    std::vector<EigenPair> out;
    out.reserve(idx.size());
    for (int i : idx)
        out.push_back(pair_from(es.eigenvectors().col(i), es.eigenvalues()(i)));
    return out;
}

EigenPair eigenpair(const Matrix& a, const AlgebraContext& ctx, double tol) {
    auto pairs = all_eigenpairs(a, ctx);
    if (pairs.empty()) throw EigenFailure("eigenpair: empty matrix");
    const EigenPair& p = pairs.front();
    Matrix lhs = mat_mul(a, p.f, ctx);
    Matrix rhs = mat_mul(p.f, Matrix::scalar(Scalar(p.lambda, 0.0)), ctx);
    if (frob_norm(lhs - rhs, ctx) > tol * (1.0 + frob_norm(a, ctx)))
        throw EigenFailure("eigenpair: residual too large");
    return p;
}

namespace {

// Columns of `real_cols` spanning its range, orthonormalized.
Eigen::MatrixXd orthonormal_range(const Eigen::MatrixXd& real_cols, double rel_tol = 1e-10) {
    if (real_cols.cols() == 0) return Eigen::MatrixXd(real_cols.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_cols, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double cutoff = rel_tol * (s.size() ? s.maxCoeff() : 0.0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++r;
    return svd.matrixU().leftCols(r);
}

std::vector<Matrix> cols_to_basis(const Eigen::MatrixXd& q) {
    std::vector<Matrix> out;
    out.reserve(q.cols());
    for (int c = 0; c < q.cols(); ++c) out.push_back(from_real_vec(q.col(c)));
    return out;
}

Eigen::MatrixXd basis_to_cols(const std::vector<Matrix>& basis) {
    if (basis.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd m(4 * basis[0].rows(), static_cast<Eigen::Index>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = to_real_vec(basis[c]);
    return m;
}

} // namespace

ProjectionDecomposition projection_ops(const Matrix& pi, const AlgebraContext& ctx,
                                       double tol) {
    if (pi.rows() != pi.cols()) throw SizeMismatch("projection_ops");
    const double scale = 1.0 + frob_norm(pi, ctx);
    if (frob_norm(mat_mul(pi, pi, ctx) - pi, ctx) > tol * scale)
        throw NotIdempotent("projection_ops: pi^2 != pi");
    Eigen::MatrixXd p = real_operator(pi, ctx);
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - p;
    ProjectionDecomposition d;
    d.pi = pi;
    d.range_basis = cols_to_basis(orthonormal_range(p));
    d.kernel_basis = cols_to_basis(orthonormal_range(q));
    return d;
}

std::vector<Matrix> module_closure(const std::vector<Matrix>& basis,
                                   const AlgebraContext& ctx) {
    if (basis.empty()) return {};
    const Scalar units[4] = {Scalar::one(), Scalar::i(), Scalar::j(), Scalar::k()};
    std::vector<Matrix> gen;
    for (const auto& v : basis)
        for (const auto& u : units)
            gen.push_back(mat_mul(v, Matrix::scalar(u), ctx));
    return cols_to_basis(orthonormal_range(basis_to_cols(gen)));
}

std::vector<Matrix> h_orthogonal_complement(const std::vector<Matrix>& basis,
                                            const FormH& form) {
    const int n = form.H.rows();
    if (basis.empty()) return cols_to_basis(Eigen::MatrixXd::Identity(4 * n, 4 * n));
    // [f, H m] = f_real^T G R(H) m_real; complement = null space of rows.
    Eigen::MatrixXd w =
        bilinear_gram(n, form.ctx) * real_operator(form.H, form.ctx) * basis_to_cols(basis);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(w.transpose());
    lu.setThreshold(1e-10);
    Eigen::MatrixXd kernel = lu.kernel();
    return cols_to_basis(orthonormal_range(kernel));
}

bool is_h_nondegenerate(const std::vector<Matrix>& basis, const FormH& form,
                        double tol) {
    if (basis.empty()) return true;
    const int k = static_cast<int>(basis.size());
    Eigen::MatrixXd gram(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gram(i, j) = form(basis[i], basis[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    const double smax = svd.singularValues().maxCoeff();
    const double scale = 1.0 + frob_norm(form.H, form.ctx);
    return svd.singularValues().minCoeff() > tol * std::max(smax, scale);
}

bool kernel_positivity_check(const std::vector<std::vector<Matrix>>& blocks,
                             const AlgebraContext& ctx, double tol) {
    const size_t np = blocks.size();
    if (np == 0) return true;
    const int n = blocks[0][0].rows();
    Matrix big(static_cast<int>(np) * n, static_cast<int>(np) * n);
    for (size_t k = 0; k < np; ++k) {
        if (blocks[k].size() != np) throw SizeMismatch("kernel_positivity_check");
        for (size_t j = 0; j < np; ++j)
            big.set_block(static_cast<int>(k) * n, static_cast<int>(j) * n, blocks[k][j]);
    }
    if (!is_star_symmetric(big, ctx, std::max(tol, 1e-7)))
        throw NotStarHermitian("kernel_positivity_check: K(z,w) != K(w,z)^*");
    return is_star_nonnegative(big, ctx, tol);
}

} // namespace ht
