#include "fermiblock/classical_local.hpp"

#include <cmath>

#include "fermiblock/chebyshev.hpp"

namespace fermiblock {

namespace {

// w = (h * inv_scale) v through row/entry queries
SparseVec sparse_apply(const OracleTuple& h, const SparseVec& v, double inv_scale,
                       std::uint64_t& entry_evals) {
    SparseVec w;
    for (const auto& [col, amp] : v) {
        for (Index i : h.row(col)) {
            ++entry_evals;
            const cplx val = h.entry(i, col);
            if (val != cplx{0.0, 0.0}) w[i] += inv_scale * val * amp;
        }
    }
    // drop exact cancellations so supports stay literal
    for (auto it = w.begin(); it != w.end();)
        it = (it->second == cplx{0.0, 0.0}) ? w.erase(it) : std::next(it);
    return w;
}

}  // namespace

LocalKrylovState grow_monomial(const OracleTuple& oracle_h, Index j, int max_order,
                               double inv_scale) {
    if (j >= oracle_h.dim()) throw std::out_of_range("grow_monomial: start index out of range");
    LocalKrylovState st;
    st.center = j;
    st.max_order = max_order;
    st.vectors.reserve(max_order + 1);
    st.vectors.push_back({{j, cplx{1.0, 0.0}}});
    st.support_sizes.push_back(1);
    for (int k = 1; k <= max_order; ++k) {
        st.vectors.push_back(sparse_apply(oracle_h, st.vectors.back(), inv_scale, st.entry_evals));
        st.support_sizes.push_back(st.vectors.back().size());
    }
    return st;
}

std::vector<std::size_t> support_growth(const OracleTuple& oracle_h, Index j, int max_order) {
    return grow_monomial(oracle_h, j, max_order).support_sizes;
}

LocalEntryResult local_thermal_entry(const OracleTuple& oracle_h, double beta, Index i, Index j,
                                     int order) {
    if (order < 1) throw std::invalid_argument("local_thermal_entry: order must be >= 1");
    const double s = oracle_h.normalization();
    const double c = beta * s;
    auto approx = fermi_dirac_approx(c, order);  // quarter-scaled target

    LocalEntryResult out;
    out.certified_bound = 4.0 * approx.certified_bound;

    // Chebyshev three-term recurrence on sparse vectors: v_k = T_k(h/s)|j>
    SparseVec prev{{j, cplx{1.0, 0.0}}};
    auto pick = [i](const SparseVec& v) {
        auto it = v.find(i);
        return it == v.end() ? cplx{0.0, 0.0} : it->second;
    };
    cplx acc = 4.0 * approx.coeffs[0] * pick(prev);
    if (order >= 1) {
        SparseVec cur = sparse_apply(oracle_h, prev, 1.0 / s, out.entry_evals);
        acc += 4.0 * approx.coeffs[1] * pick(cur);
        for (int k = 2; k <= order; ++k) {
            SparseVec next = sparse_apply(oracle_h, cur, 2.0 / s, out.entry_evals);
            for (const auto& [idx, amp] : prev) {
                auto& slot = next[idx];
                slot -= amp;
                if (slot == cplx{0.0, 0.0}) next.erase(idx);
            }
            acc += 4.0 * approx.coeffs[k] * pick(next);
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    out.value = acc;
    return out;
}

LocalEntryResult local_dynamics_entry(const OracleTuple& oracle_h,
                                      const std::function<cplx(Index, Index)>& m0_entry, double t,
                                      Index i, Index j, int order) {
    if (!std::isfinite(t)) throw std::invalid_argument("local_dynamics_entry: t must be finite");
    if (order < 1) throw std::invalid_argument("local_dynamics_entry: order must be >= 1");
    const double s = oracle_h.normalization();
    const double tau = t * s;  // p(h/s) tracks e^{i t h} = e^{i tau (h/s)}
    auto taylor = exp_taylor(tau, order);

    LocalEntryResult out;
    const double tail = taylor.instantiated_bound;
    out.certified_bound = 2.0 * tail + tail * tail;  // ||M0|| <= 1

    // <i| p(h/s) = (sum_k conj(c_k) (h/s)^k |i>)^dag; p(-h/s)|j> has the
    // same conjugated coefficients
    auto accumulate = [&](Index start) {
        SparseVec power{{start, cplx{1.0, 0.0}}};
        SparseVec total;
        for (int k = 0; k <= order; ++k) {
            const cplx ck = std::conj(taylor.coeffs[k]);
            for (const auto& [idx, amp] : power) total[idx] += ck * amp;
            if (k < order) power = sparse_apply(oracle_h, power, 1.0 / s, out.entry_evals);
        }
        return total;
    };
    const SparseVec u = accumulate(i);
    const SparseVec w = accumulate(j);

    cplx acc{0.0, 0.0};
    for (const auto& [a, ua] : u)
        for (const auto& [b, wb] : w) {
            const cplx m = m0_entry(a, b);
            if (m != cplx{0.0, 0.0}) acc += std::conj(ua) * m * wb;
        }
    out.value = acc;
    return out;
}

}  // namespace fermiblock
