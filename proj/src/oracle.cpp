#include "fermiblock/oracle.hpp"

#include <cmath>
#include <memory>

namespace fermiblock {

OracleTuple build_fermi_sea(int n, double fill_fraction) {
    if (fill_fraction < 0.0 || fill_fraction > 1.0)
        throw std::invalid_argument("build_fermi_sea: fill_fraction must be in [0, 1]");
    const Index dim = Index{1} << n;
    const double occ_real = fill_fraction * static_cast<double>(dim);
    const Index occupied = static_cast<Index>(std::llround(occ_real));
    if (std::abs(occ_real - static_cast<double>(occupied)) > 1e-9)
        throw std::invalid_argument("build_fermi_sea: fill_fraction * 2^n must be an integer");

    OracleTuple o;
    o.n = n;
    o.sparsity = 1;
    o.label = "fermi-sea(n=" + std::to_string(n) + ",fill=" + std::to_string(fill_fraction) + ")";
    o.row = [occupied](Index i) -> std::vector<Index> {
        if (i < occupied) return {i};
        return {};
    };
    o.entry = [occupied](Index i, Index j) -> cplx {
        return (i == j && i < occupied) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    };
    return o;
}

OracleTuple build_diagonal_projector(int n, std::vector<int> occupied) {
    const Index dim = Index{1} << n;
    if (occupied.size() != dim)
        throw std::invalid_argument("build_diagonal_projector: occupation vector size mismatch");
    auto occ = std::make_shared<const std::vector<int>>(std::move(occupied));

    OracleTuple o;
    o.n = n;
    o.sparsity = 1;
    o.label = "diag-projector(n=" + std::to_string(n) + ")";
    o.row = [occ](Index i) -> std::vector<Index> {
        if ((*occ)[i]) return {i};
        return {};
    };
    o.entry = [occ](Index i, Index j) -> cplx {
        return (i == j && (*occ)[i]) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    };
    return o;
}

MatrixXcd materialize(const OracleTuple& oracle, int cap) {
    if (oracle.n > cap)
        throw std::invalid_argument("materialize: n = " + std::to_string(oracle.n) +
                                    " exceeds cap " + std::to_string(cap));
    const Index dim = oracle.dim();
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j : oracle.row(i)) m(i, j) = oracle.entry(i, j);
    return m;
}

double gershgorin_bound(const OracleTuple& oracle) {
    const Index dim = oracle.dim();
    double bound = 0.0;
    for (Index i = 0; i < dim; ++i) {
        double row_sum = 0.0;
        for (Index j : oracle.row(i)) row_sum += std::abs(oracle.entry(i, j));
        bound = std::max(bound, row_sum);
    }
    return bound;
}

}  // namespace fermiblock
