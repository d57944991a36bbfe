#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermiblock/oracle.hpp"
#include "fermiblock/types.hpp"

namespace fermiblock {

/// Two-qubit gate acting on circuit qubits q1 < q2 (1-based; qubit 1 is the
/// most significant bit of the register). The 4x4 matrix is indexed by
/// (bit of q1, bit of q2).
struct Gate {
    int q1 = 1, q2 = 2;
    Eigen::Matrix4cd u;
};

struct GateList {
    int qubits = 0;  // q, total circuit qubits (>= 2)
    std::vector<Gate> gates;

    int length() const { return static_cast<int>(gates.size()); }
    /// Throws unless every gate is unitary to 1e-12 with valid indices.
    void validate() const;
    /// Copy padded with identity gates so length + 1 is a power of two.
    GateList padded() const;
};

/// Text format, one gate per line after a `qubits N` header:
///   H k | X k | T k | CNOT c t | U q1 q2 <16 complex pairs, row-major>
/// Single-qubit named gates embed as G (x) I on an adjacent pair.
GateList parse_gate_list(const std::string& text);

/// Clock (history) Hamiltonian h = sum_l |l+1><l| (x) W_l + h.c. on
/// q_clock + q qubits, with row/entry computed on demand from the gate
/// list; at most 8-sparse.
OracleTuple build_clock_hamiltonian(const GateList& gates);

/// (L+1)-site hopping chain with unit couplings: J, plus the closed-form
/// spectrum eps_k = 2 cos(pi k/(L+2)) and eigenvectors
/// sqrt(2/(L+2)) sin(pi j k/(L+2)), k = 1..L+1.
struct ChainSpectrum {
    MatrixXd j;
    VectorXd eigenvalues;   // analytic, index k-1
    MatrixXd eigenvectors;  // column k-1 = analytic eigenvector
};
ChainSpectrum hopping_chain(int chain_len);

/// |<L+1| e^{-iJt} |1>|^2 by the spectral sum.
double overlap_probe(int chain_len, double t);

/// Mean endpoint overlap over a uniform time grid on [0, T]; converges to
/// 3/(2(L+2)).
double randomized_time_average(int chain_len, double window, std::uint64_t npoints);
/// Window 4 (L+2)^2 log(2(L+2)) and an alias-safe point count.
double randomized_time_average(int chain_len);
double default_average_window(int chain_len);
std::uint64_t default_average_points(int chain_len, double window);

/// Full-pipeline probe of the time-evolved correlation-matrix entry at
/// (1_clock, 0...0) against the eigen-oracle reference.
struct Theorem1Result {
    cplx estimate;
    double exact = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double delta = 0.0;
    std::uint64_t samples = 0;
    int n_total = 0;
    int q_clock = 0;
};
Theorem1Result theorem1_instance(const GateList& gates, double t, double eps2, double delta,
                                 std::uint64_t seed);

/// Diagonal occupation vector of the projector M0 used by theorem1_instance:
/// clock register all ones (l = L+1) and circuit qubit 1 set.
std::vector<int> theorem1_m0_occupation(const GateList& padded_gates);

}  // namespace fermiblock
