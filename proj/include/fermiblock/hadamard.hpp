#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fermiblock/block_encoding.hpp"
#include "fermiblock/oracle.hpp"

namespace fermiblock {

/// A statistically estimated complex value with its error decomposition:
/// the total claim is |value - target| <= eps1 + alpha * eps2 with
/// probability >= 1 - delta.
struct EstimateResult {
    cplx value;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double delta = 0.0;
    std::uint64_t samples = 0;
    double alpha = 1.0;
};

/// Total Hadamard-test shots for accuracy eps2 at confidence 1 - delta,
/// split evenly between the two phase settings:
/// ceil(c * eps2^-2 * log(4/delta)), rounded up to even. The default c = 4
/// gives each setting a two-sided Hoeffding budget at tolerance eps2/2.
std::uint64_t hadamard_sample_count(double eps2, double delta, double chernoff_constant = 4.0);

/// Simulated Hadamard test on the stored unitary: Bernoulli draws at
/// p0(theta=0) = 1/2 + Re<0i|U|0j>/2 and p0(theta=pi/2) = 1/2 - Im<.>/2,
/// returning alpha times the estimated amplitude. Deterministic under seed.
EstimateResult estimate_entry(const BlockEncoding& be, Index i, Index j, double eps2,
                              double delta, std::uint64_t seed,
                              double chernoff_constant = 4.0);

/// Infinite-sample shortcut: the extracted block entry exactly.
cplx estimate_entry_exact(const BlockEncoding& be, Index i, Index j);

/// Hamiltonian terms as unordered index pairs (i <= j) with nonzero h_ij.
std::vector<std::pair<Index, Index>> enumerate_terms(const OracleTuple& oracle_h);

/// Expectation of the single term {i, j}: h_ij M_ji + conj(h_ij) M_ij for
/// i != j, h_ii M_ii on the diagonal.
double term_expectation(const OracleTuple& oracle_h, const MatrixXcd& m, Index i, Index j);

/// Term draws for the density estimate: ceil(8 eps^-2 log(2/delta)), a
/// two-sided Hoeffding budget for term expectations in [-2, 2].
std::uint64_t energy_sample_count(double eps, double delta);

/// Mean term expectation Tr(H rho)/K estimated by uniform term sampling;
/// entries are read exactly from the encoding. Guarantee
/// |result - Tr(H rho)/K| <= eps with probability >= 1 - delta.
double estimate_energy_density(const BlockEncoding& be_m, const OracleTuple& oracle_h,
                               double eps, double delta, std::uint64_t seed);

/// All-terms mean (no sampling).
double energy_density_exact(const BlockEncoding& be_m, const OracleTuple& oracle_h);

/// Tr(M)/2^n by uniform sampling of diagonal entries; samples = 0 averages
/// the full diagonal.
double particle_density(const BlockEncoding& be_m, std::uint64_t samples, std::uint64_t seed);

/// <a+_i a+_j a_k a_l> = M_il M_jk - M_ik M_jl for a free-fermionic state
/// with correlation matrix M.
cplx wick_quartic(const MatrixXcd& m, Index i, Index j, Index k, Index l);

/// Free energy density F/2^n = -(beta 2^n)^{-1} Tr log(I + e^{-beta h}),
/// estimated by applying the log-Fermi polynomial through the block-encoding
/// pipeline and sampling diagonal entries (samples = 0: full diagonal).
/// Throws if the degree-d certificate exceeds `tolerance` when given.
double free_energy_density(const OracleTuple& oracle_h, double beta, int degree,
                           std::uint64_t samples, std::uint64_t seed,
                           std::optional<double> tolerance = std::nullopt, int cap = 12);

double exact_free_energy_density(const MatrixXcd& h, double beta);

}  // namespace fermiblock
