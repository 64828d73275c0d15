#ifndef HT_REALIZATION_HPP
#define HT_REALIZATION_HPP

#include "ht/matrix.hpp"

namespace ht {

// State-space node for R(x) = D + x C (I - xA)^{-1} B.  N = 0 means the
// constant function D.
struct Node {
    Matrix A, B, C, D;
    AlgebraContext ctx;

    Node(Matrix a, Matrix b, Matrix c, Matrix d, const AlgebraContext& context);

    int state_dim() const { return A.rows(); }
    int out_dim() const { return D.rows(); }
    int in_dim() const { return D.cols(); }
};

Matrix eval(const Node& node, double x, double tol = 1e-10);

// Cascade: A = [[A1, B1 C2],[0, A2]], B = [B1 D2; B2], C = [C1, D1 C2],
// D = D1 D2; realizes R1(x) R2(x).
Node node_product(const Node& n1, const Node& n2);

// (A - B D^{-1} C, B D^{-1}, -D^{-1} C, D^{-1}) realizes R^{-1}.
Node node_inverse(const Node& node, double tol = 1e-10);
Matrix a_times(const Node& node, double tol = 1e-10);

// Realizes x -> (R(x))^*: node (A^*, C^*, B^*, D^*).
Node node_adjoint(const Node& node);

bool is_observable(const Node& node, double tol = 1e-10);
bool is_controllable(const Node& node, double tol = 1e-10);
bool is_minimal(const Node& node, double tol = 1e-10);

// Half the rank of the block Hankel matrix of embedded Markov parameters.
int mcmillan_degree(const Node& node, double tol = 1e-10);

// Unique S with S A1 = A2 S, S B1 = B2, C1 = C2 S for minimal nodes of
// equal size and D; throws NotSimilar otherwise.
Matrix similarity_between(const Node& n1, const Node& n2, double tol = 1e-8);

// Sample grid on [-0.4, 0.4] avoiding poles of the given nodes.
std::vector<double> regular_samples(const std::vector<const Node*>& nodes,
                                    int count = 11, double tol = 1e-8);

} // namespace ht

#endif // HT_REALIZATION_HPP
