#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fermiblock {

using cplx = std::complex<double>;
using Index = std::uint64_t;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

inline bool is_pow2(Index x) { return x != 0 && (x & (x - 1)) == 0; }

inline Index next_pow2(Index x) {
    Index p = 1;
    while (p < x) p <<= 1;
    return p;
}

/// Exact log2 of a power of two.
inline int log2_exact(Index x) {
    if (!is_pow2(x)) throw std::invalid_argument("log2_exact: not a power of two");
    int n = 0;
    while (x > 1) { x >>= 1; ++n; }
    return n;
}

/// Smallest n with 2^n >= x.
inline int qubits_for(Index x) { return log2_exact(next_pow2(x)); }

}  // namespace fermiblock
