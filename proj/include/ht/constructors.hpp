#ifndef HT_CONSTRUCTORS_HPP
#define HT_CONSTRUCTORS_HPP

#include "ht/structured.hpp"

namespace ht {

// Truncated power series with H_t coefficients.
struct SeriesHt {
    std::vector<Scalar> coeff; // f_0 .. f_K

    int order() const { return static_cast<int>(coeff.size()) - 1; }
};

SeriesHt series_add(const SeriesHt& f, const SeriesHt& g);
SeriesHt star_product(const SeriesHt& f, const SeriesHt& g, const AlgebraContext& ctx);
// Right point evaluation: sum f_n q^n.
Scalar star_eval(const SeriesHt& f, const Scalar& q, const AlgebraContext& ctx);
// Taylor coefficients of a scalar-valued node at 0: f_0 = D, f_n = C A^{n-1} B.
SeriesHt series_from_node(const Node& node, int order);

struct GramStein {
    Matrix G;
};

struct CertifiedNode {
    Node node;
    Certificate cert;
};

struct SignedCertifiedNode {
    Node node;
    Certificate cert;
    Signature J;
};

struct ThetaData {
    Node node;
    Certificate cert;
    Matrix G;
};

// (1 + x a^*)(1 - x a)^{-1}; certificate h = -1/(a + a^*), J = 1.
CertifiedNode blaschke_line(const Scalar& alpha, const AlgebraContext& ctx);

// diag((1 + x b^*)(1 - x a)^{-1}, (1 - x b)^{-1}(a^* + b) x + 1) with
// H = [[0,1],[1,0]] and J = -H.
SignedCertifiedNode blaschke_line_pair(const Scalar& alpha, const Scalar& beta,
                                       const AlgebraContext& ctx);

// Degree-one section with C^* J C = 0: A = a skew, C = [b; g], D = I,
// J = diag(1,-1), H = h.
SignedCertifiedNode brune_section(const Scalar& alpha, const Scalar& beta,
                                  const Scalar& gamma, double h,
                                  const AlgebraContext& ctx);

// (x - a)(1 - x a^*)^{-1}; certificate h = 1 - a a^*, J = 1.
CertifiedNode blaschke_circle(const Scalar& alpha, const AlgebraContext& ctx);

// G - A^* G A = C^* C for rho(A) < 1, cross-checked against the series.
GramStein stein_solve(const Matrix& A, const Matrix& C, const AlgebraContext& ctx,
                      double tol = 1e-10);

// Theta product with A = diag(a_i^*), C = ones, Stein Gram certificate.
ThetaData theta_builder(const std::vector<Scalar>& alphas, const AlgebraContext& ctx);

// 1 - (1-x) C (I - xA)^{-1} G^{-1} (I - A^*)^{-1} C^*.
Matrix theta_alt_eval(const ThetaData& theta, double x);

} // namespace ht

#endif // HT_CONSTRUCTORS_HPP
