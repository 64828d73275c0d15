#ifndef HT_FACTORIZATION_HPP
#define HT_FACTORIZATION_HPP

#include "ht/structured.hpp"

namespace ht {

struct FactorPair {
    Node R1, R2;
    ProjectionDecomposition pi;
};

struct CertifiedFactorPair {
    Node R1, R2;
    Certificate cert1, cert2;
    ProjectionDecomposition pi;
};

struct SummandPair {
    Node phi1, phi2;
    Certificate cert1, cert2;
};

// A(ker pi) in ker pi and A^x(ran pi) in ran pi.
bool is_supporting_projection(const Node& node, const Matrix& pi, double tol = 1e-8);

// R(x) = D * Rt(x) with Rt(0) = I; Rt = (A, B, D^{-1}C, I).
std::pair<Matrix, Node> normalize_D(const Node& node);

// Minimal factorization along a supporting projection; requires D = I.
// Left factor lives on ker pi, right factor on ran pi.
FactorPair factor_from_projection(const Node& node, const Matrix& pi,
                                  double tol = 1e-8);

// J-unitary factorization along an A-invariant H-nondegenerate subspace.
// The left factor carries the block H11 of H in the adapted basis, the
// right factor H22.
CertifiedFactorPair junitary_factor(const Node& node, const Signature& J,
                                    const Certificate& cert,
                                    const std::vector<Matrix>& subspace_basis,
                                    double tol = 1e-8);

// Additive decomposition of an anti-symmetric phi through T = [[I,phi],[0,I]].
SummandPair additive_decomposition(const Node& phi_node, const Certificate& cert,
                                   const std::vector<Matrix>& subspace_basis,
                                   double tol = 1e-8);

// Columns over H_t whose right module has the real span of `real_basis`;
// throws DegenerateSubspace when no such free basis exists (t > 0 only).
std::vector<Matrix> module_columns(const std::vector<Matrix>& real_basis,
                                   const AlgebraContext& ctx);

} // namespace ht

#endif // HT_FACTORIZATION_HPP
