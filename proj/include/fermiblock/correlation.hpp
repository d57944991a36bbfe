#pragma once

#include <optional>

#include "fermiblock/block_encoding.hpp"
#include "fermiblock/oracle.hpp"

namespace fermiblock {

/// Encoding of the thermal correlation matrix M = (I + e^{beta h})^{-1},
/// reported at the physical scale alpha = 4 (the stored block carries the
/// internal 1/4 factor). If a target eps_PA (alpha level) is given, throws
/// when the degree-d certificate exceeds it. delta_qsvt is the modeled
/// synthesis error at block level.
BlockEncoding thermal_correlation(const OracleTuple& oracle_h, double beta, int degree,
                                  std::optional<double> target_eps_pa = std::nullopt,
                                  double delta_qsvt = 0.0, int cap = 12);

/// Smallest degree whose physical-scale thermal certificate is <= eps_pa.
int thermal_degree_for(const OracleTuple& oracle_h, double beta, double eps_pa);

/// Encoding of e^{i h t1} M0 e^{-i h t2} from an encoding of M0.
BlockEncoding time_evolved_correlation(const OracleTuple& oracle_h, const BlockEncoding& be_m0,
                                       double t1, double t2, int cap = 12);

/// Encoding of the Fourier-domain Green's function G(omega, h) w.r.t. the
/// thermal state, reported at the physical scale alpha = 8/eta.
BlockEncoding greens_fourier(const OracleTuple& oracle_h, double beta, double eta, double omega,
                             int degree, double delta_qsvt = 0.0, int cap = 12);

/// Exact references through the spectral decomposition of h.
MatrixXcd exact_thermal(const MatrixXcd& h, double beta);
MatrixXcd exact_evolved(const MatrixXcd& h, const MatrixXcd& m0, double t1, double t2);
MatrixXcd exact_greens(const MatrixXcd& h, double beta, double eta, double omega);

/// F M F^dag with F the unitary DFT over the lattice index factorization
/// (axis 0 most significant), identity on the orbital factor.
MatrixXcd momentum_transform(const MatrixXcd& m, const std::vector<std::int64_t>& dims,
                             int orbitals = 1);

}  // namespace fermiblock
