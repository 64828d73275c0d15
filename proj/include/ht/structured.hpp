#ifndef HT_STRUCTURED_HPP
#define HT_STRUCTURED_HPP

#include <optional>
#include <string>
#include <utility>

#include "ht/realization.hpp"

namespace ht {

// J = J^* = J^{-1}.
struct Signature {
    Matrix J;

    Signature(Matrix j, const AlgebraContext& ctx, double tol = kDefaultTol);
};

enum class CertKind { LineJUnitary, CircleJUnitary, LineAntiSym, CircleAntiSym };

const char* kind_name(CertKind kind);
bool is_line_kind(CertKind kind);
bool is_junitary_kind(CertKind kind);

struct Certificate {
    Matrix H;
    CertKind kind;
    std::vector<std::pair<std::string, double>> residuals;
};

// Per-equation residual report from verification.
struct VerifyReport {
    std::vector<std::pair<std::string, double>> entries;
    double max_residual = 0.0;
    bool ok = false;
};

// Least-squares solve for the *-symmetric H certifying the given class.
// Requires a minimal node; J for the J-unitary kinds; A invertible for the
// circle kinds.
Certificate solve_certificate(const Node& node, const std::optional<Signature>& J,
                              CertKind kind, double tol = 1e-8);

// Checks (i) the defining functional identity on samples, (ii) the algebraic
// certificate equations, (iii) the kernel identity against
// C(I-xA)^{-1} H^{-1} (I-yA^*)^{-1} C^*.
VerifyReport verify_certificate(const Node& node, const std::optional<Signature>& J,
                                const Certificate& cert,
                                const std::vector<double>& sample_xs,
                                double tol = 1e-8);

// Default per-kind grid avoiding poles of R(x) (and of R(1/x) for circle).
std::vector<double> default_samples(const Node& node, CertKind kind);

// Anti-symmetrization: line phi(x) = psi(x) - psi(-x)^*, circle
// phi(x) = psi(x) - psi(1/x)^*, as a doubled node.
Node make_phi_from_psi(const Node& psi, CertKind kind);

// T(x) = [[I, phi(x)],[0, I]]; J-unitary for J = [[0,I],[I,0]] exactly when
// phi is anti-symmetric of the matching kind, with certificate -H.
Node embed_T(const Node& phi_node);

} // namespace ht

#endif // HT_STRUCTURED_HPP
