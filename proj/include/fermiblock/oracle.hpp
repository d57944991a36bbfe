#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fermiblock/types.hpp"

namespace fermiblock {

/// Sparse row/entry access to an N x N Hermitian matrix, N = 2^n.
///
/// `row(i)` returns the column indices of the nonzero entries of row i in
/// ascending order (at most `sparsity` of them); `entry(i, j)` returns the
/// matrix element, zero whenever j is not listed in row(i). Entries satisfy
/// |entry| <= entry_bound, with entry_bound == 1 except for collision-weighted
/// graph Hamiltonians. Oracles are immutable after construction and safe to
/// query concurrently.
struct OracleTuple {
    int n = 0;             // qubit count; matrix dimension is 2^n
    int sparsity = 0;      // s: max nonzeros in any row/column
    int entry_bits = 53;   // n_a: bits of entry precision (metadata; storage is exact double)
    double entry_bound = 1.0;
    std::string label;

    std::function<std::vector<Index>(Index)> row;
    std::function<cplx(Index, Index)> entry;

    Index dim() const { return Index{1} << n; }

    /// Scale used when the matrix is downstream normalized to a contraction:
    /// max row sum <= sparsity * entry_bound bounds the spectral norm.
    double normalization() const { return static_cast<double>(sparsity) * entry_bound; }
};

/// Diagonal correlation-matrix oracle with the lowest fill * 2^n modes
/// occupied (entries 1) and the rest empty.
OracleTuple build_fermi_sea(int n, double fill_fraction);

/// Diagonal oracle from an explicit 0/1 occupation vector (dimension 2^n).
OracleTuple build_diagonal_projector(int n, std::vector<int> occupied);

/// Dense N x N matrix assembled from the row/entry functions. Refuses
/// n > cap as a memory guard.
MatrixXcd materialize(const OracleTuple& oracle, int cap = 12);

/// Upper bound on the spectral norm: max over rows of the absolute row sum.
double gershgorin_bound(const OracleTuple& oracle);

}  // namespace fermiblock
