#ifndef HT_MATRIX_HPP
#define HT_MATRIX_HPP

#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ht/algebra.hpp"

namespace ht {

// Dense rectangular matrix over H_t, row-major.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

    static Matrix identity(int n);
    static Matrix scalar(const Scalar& q) {
        Matrix m(1, 1);
        m(0, 0) = q;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Scalar& operator()(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
    const Scalar& operator()(int r, int c) const {
        return e_[static_cast<size_t>(r) * cols_ + c];
    }

    Matrix operator-() const;
    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    Matrix block(int r0, int c0, int nr, int nc) const;
    void set_block(int r0, int c0, const Matrix& sub);

private:
    int rows_, cols_;
    std::vector<Scalar> e_;
};

// Entrywise *-adjoint composed with transpose.
Matrix conj_star(const Matrix& a);

Matrix mat_mul(const Matrix& a, const Matrix& b, const AlgebraContext& ctx);

// Blockwise complex embedding, 2r x 2c.
Eigen::MatrixXcd embed(const Matrix& a, const AlgebraContext& ctx);
Matrix unembed(const Eigen::MatrixXcd& m, const AlgebraContext& ctx,
               double tol = kDefaultTol);

// Inverse through the embedding; I(A^{-1}) = I(A)^{-1}.
Matrix mat_inv(const Matrix& a, const AlgebraContext& ctx, double tol = 1e-10);

// Frobenius norm of the embedding; the norm used for all residuals.
double frob_norm(const Matrix& a, const AlgebraContext& ctx);

double cond_number(const Eigen::MatrixXcd& m);
int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);

bool is_star_symmetric(const Matrix& a, const AlgebraContext& ctx,
                       double tol = kDefaultTol);

// [f, g] on columns and the H-weighted variant [f, g]_H = [f, Hg].
double vec_bilinear(const Matrix& f, const Matrix& g, const AlgebraContext& ctx);

struct FormH {
    Matrix H;
    AlgebraContext ctx;

    FormH(Matrix h, const AlgebraContext& c, double tol = kDefaultTol);
    double operator()(const Matrix& f, const Matrix& g) const;
};

// --- Real-coordinate machinery -------------------------------------------
//
// H_t^N as a real 4N-dimensional space, coordinates per entry
// (Re a, Im a, Re b, Im b).  Left multiplication by an H_t matrix is
// real-linear; these helpers realize it as a real matrix.

Eigen::VectorXd to_real_vec(const Matrix& col);
Matrix from_real_vec(const Eigen::VectorXd& v);
Eigen::MatrixXd real_operator(const Matrix& a, const AlgebraContext& ctx);

// Gram matrix of [.,.] on real coordinates: block diagonal
// diag(2, 2, -2t, -2t) per entry.
Eigen::MatrixXd bilinear_gram(int n, const AlgebraContext& ctx);

// Real symmetric 4n x 4n matrix Q with [p, Mp] = x^T Q x.
Eigen::MatrixXd quadratic_form_matrix(const Matrix& m, const AlgebraContext& ctx);

bool is_star_nonnegative(const Matrix& m, const AlgebraContext& ctx,
                         double tol = kDefaultTol);

// Pivoted outer-product factorization M = F F^* for t < 0; F lower
// triangular up to the zero-row padding of the pivot scan.
Matrix positive_factorize(const Matrix& m, const AlgebraContext& ctx,
                          double tol = kDefaultTol);

// Right eigen-pair A f = f lambda with lambda complex, built from a complex
// eigen-pair of the embedding and its companion column.
struct EigenPair {
    Matrix f;       // N x 1 over H_t
    Complex lambda;
};
EigenPair eigenpair(const Matrix& a, const AlgebraContext& ctx, double tol = 1e-8);
std::vector<EigenPair> all_eigenpairs(const Matrix& a, const AlgebraContext& ctx);

// --- Subspaces and projections -------------------------------------------

struct ProjectionDecomposition {
    Matrix pi;
    std::vector<Matrix> range_basis;  // H_t columns, real span = ran pi
    std::vector<Matrix> kernel_basis; // H_t columns, real span = ker pi
};

ProjectionDecomposition projection_ops(const Matrix& pi, const AlgebraContext& ctx,
                                       double tol = kDefaultTol);

// Right H_t-module generated by the given columns, as a real-span basis.
std::vector<Matrix> module_closure(const std::vector<Matrix>& basis,
                                   const AlgebraContext& ctx);

std::vector<Matrix> h_orthogonal_complement(const std::vector<Matrix>& basis,
                                            const FormH& form);
bool is_h_nondegenerate(const std::vector<Matrix>& basis, const FormH& form,
                        double tol = 1e-8);

// K given as an n*n H_t block per ordered sample pair (k, j).
bool kernel_positivity_check(const std::vector<std::vector<Matrix>>& blocks,
                             const AlgebraContext& ctx, double tol = kDefaultTol);

} // namespace ht

#endif // HT_MATRIX_HPP
