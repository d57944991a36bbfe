#pragma once

#include <string>

#include "fermiblock/chebyshev.hpp"
#include "fermiblock/oracle.hpp"
#include "fermiblock/types.hpp"

namespace fermiblock {

/// Additive error decomposition carried by pipeline-produced encodings:
///   eps_Tot = eps_PA + eps_ph + delta_qsvt (+ eps_M where applicable),
/// all components stated at the scale of the physical target (alpha level).
struct ErrorBudget {
    double eps_PA = 0.0;      // polynomial approximation error
    double eps_ph = 0.0;      // block-polynomial propagation error
    double delta_qsvt = 0.0;  // modeled synthesis error
    double eps_M = 0.0;       // initial-state encoding error

    double total() const { return eps_PA + eps_ph + delta_qsvt + eps_M; }
};

/// An (alpha, m, eps) block-encoding: `unitary` acts on n system qubits plus
/// m ancillas (ancillas most significant), and
///   || A - alpha * <0|^m unitary |0>^m || <= eps
/// for the encoded target A. Values are immutable; composition returns new
/// encodings. `emulated_ancillas` mirrors the circuit-construction ancilla
/// count of the corresponding resource statement without building gates.
struct BlockEncoding {
    int n = 0;
    int m = 0;
    double alpha = 1.0;
    double eps = 0.0;
    MatrixXcd unitary;
    std::string provenance;
    int emulated_ancillas = 0;
    std::string resource_note;
    ErrorBudget budget;

    Index block_dim() const { return Index{1} << n; }
    double unitarity_defect() const;
    std::string resource_report() const;
};

/// Exact (1, 1, 0) dilation U = [[A, sqrt(I-AA+)], [sqrt(I-A+A), -A+]] of a
/// contraction. Throws if ||A|| > 1 + 1e-10.
BlockEncoding dilate(const MatrixXcd& a, const std::string& provenance = "dilate");

/// Encoding of the materialized oracle matrix with alpha = s * entry_bound,
/// so the stored block is h / alpha (a contraction by the Gershgorin bound).
/// Reference path: exact dilation, m = 1; the circuit construction's
/// m = n + 3 is recorded as metadata.
BlockEncoding encode_sparse(const OracleTuple& oracle, int cap = 12);

/// alpha * <0|^m U |0>^m: the encoded matrix up to eps.
MatrixXcd extract_block(const BlockEncoding& be);

/// Encoding of p(h/alpha_h) for a Hermitian-contraction block: the block is
/// eigendecomposed, p applied to eigenvalues, the result re-dilated. Requires
/// |p| <= 1/2 on [-1, 1]. Output eps is 4 d sqrt(eps_h / alpha_h) + delta_qsvt
/// relative to the exact polynomial image; the approximation error of p
/// against its own target is accounted by the caller.
BlockEncoding apply_polynomial(const BlockEncoding& be_h, const ChebyshevApprox& approx,
                               double delta_qsvt = 0.0);

/// Planning helper inverting the propagation rule eps_ph = 4 d sqrt(eps_h/alpha):
/// the input-encoding accuracy needed so a degree-d polynomial application
/// stays within eps_ph.
double oracle_eps_for_poly_budget(double eps_ph, int degree, double alpha);

/// Encoding of exp(i t h) where h = alpha_h * block of be_h; eps = 2|t| eps_h.
BlockEncoding evolve(const BlockEncoding& be_h, double t);
BlockEncoding evolve(const OracleTuple& oracle, double t, int cap = 12);

/// Encoding of A*B with alpha = alpha_A alpha_B, m = m_A + m_B and the
/// first-order budget eps = alpha_A eps_B + alpha_B eps_A.
BlockEncoding multiply(const BlockEncoding& a, const BlockEncoding& b);

}  // namespace fermiblock
