#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "fermiblock/oracle.hpp"
#include "fermiblock/types.hpp"

namespace fermiblock {

/// Sparse amplitude vector; no drop tolerance, so supports are exact and
/// light-cone zeros are literal.
using SparseVec = std::map<Index, cplx>;

/// The sequence (h/scale)^k |j> for k = 0..max_order, kept sparse.
struct LocalKrylovState {
    Index center = 0;
    int max_order = 0;
    std::vector<SparseVec> vectors;
    std::vector<std::size_t> support_sizes;
    std::uint64_t entry_evals = 0;  // work proxy
};

LocalKrylovState grow_monomial(const OracleTuple& oracle_h, Index j, int max_order,
                               double inv_scale = 1.0);

/// Support cardinality of h^k |j> for k = 0..max_order.
std::vector<std::size_t> support_growth(const OracleTuple& oracle_h, Index j, int max_order);

struct LocalEntryResult {
    cplx value;
    double certified_bound = 0.0;
    std::uint64_t entry_evals = 0;  // work proxy
};

/// Thermal entry M^(beta)_ij by the degree-K Chebyshev approximation applied
/// with the sparse three-term recurrence; |value - exact| is within the
/// degree-K Fermi-Dirac certificate.
LocalEntryResult local_thermal_entry(const OracleTuple& oracle_h, double beta, Index i, Index j,
                                     int order);

/// Entry of p_K(h/s) M0 p_K(-h/s) with p_K the truncated Taylor series of the
/// evolution phase; M0 supplied entrywise. Exact zero outside the K-hop
/// light cone.
LocalEntryResult local_dynamics_entry(const OracleTuple& oracle_h,
                                      const std::function<cplx(Index, Index)>& m0_entry, double t,
                                      Index i, Index j, int order);

}  // namespace fermiblock
