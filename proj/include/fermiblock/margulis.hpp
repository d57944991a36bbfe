#pragma once

#include "fermiblock/oracle.hpp"

namespace fermiblock {

/// Adjacency-style Hamiltonian of the Margulis expander on N^2 vertices
/// (v1, v2), generated by the four maps
///   t0: (v1+1, v2)   t1: (v1, v2+1)   t2: (v1+v2, v2)   t3: (v1, v2+v1)
/// and their inverses, all mod N. row(v) lists the distinct images; the
/// entry counts how many of the eight maps produce that image, so colliding
/// maps raise the matrix element (entry_bound records the largest count).
OracleTuple build_margulis(std::int64_t N);

}  // namespace fermiblock
