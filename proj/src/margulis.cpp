#include "fermiblock/margulis.hpp"

#include <algorithm>
#include <array>

namespace fermiblock {

namespace {

std::int64_t wrap(std::int64_t v, std::int64_t N) {
    v %= N;
    return v < 0 ? v + N : v;
}

// the eight images t_l^{+-1}(v), with multiplicity
std::array<std::pair<std::int64_t, std::int64_t>, 8> images(std::int64_t v1, std::int64_t v2,
                                                            std::int64_t N) {
    return {{{wrap(v1 + 1, N), v2},
             {v1, wrap(v2 + 1, N)},
             {wrap(v1 + v2, N), v2},
             {v1, wrap(v2 + v1, N)},
             {wrap(v1 - 1, N), v2},
             {v1, wrap(v2 - 1, N)},
             {wrap(v1 - v2, N), v2},
             {v1, wrap(v2 - v1, N)}}};
}

}  // namespace

OracleTuple build_margulis(std::int64_t N) {
    if (N < 2) throw std::invalid_argument("build_margulis: N must be >= 2");
    const Index n_vertices = static_cast<Index>(N * N);

    auto flat = [N](std::int64_t v1, std::int64_t v2) {
        return static_cast<Index>(v1 * N + v2);
    };

    OracleTuple o;
    o.n = qubits_for(n_vertices);
    o.label = "margulis(N=" + std::to_string(N) + ")";
    o.row = [N, n_vertices, flat](Index v) -> std::vector<Index> {
        if (v >= n_vertices) return {};
        const std::int64_t v1 = static_cast<std::int64_t>(v) / N;
        const std::int64_t v2 = static_cast<std::int64_t>(v) % N;
        std::vector<Index> cols;
        for (auto [u1, u2] : images(v1, v2, N)) cols.push_back(flat(u1, u2));
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        return cols;
    };
    o.entry = [N, n_vertices, flat](Index v, Index u) -> cplx {
        if (v >= n_vertices || u >= n_vertices) return 0.0;
        const std::int64_t v1 = static_cast<std::int64_t>(v) / N;
        const std::int64_t v2 = static_cast<std::int64_t>(v) % N;
        int count = 0;
        for (auto [u1, u2] : images(v1, v2, N))
            if (flat(u1, u2) == u) ++count;
        return static_cast<double>(count);
    };

    int max_distinct = 1;
    int max_count = 1;
    for (Index v = 0; v < n_vertices; ++v) {
        const auto cols = o.row(v);
        max_distinct = std::max(max_distinct, static_cast<int>(cols.size()));
        for (Index u : cols)
            max_count = std::max(max_count, static_cast<int>(std::real(o.entry(v, u))));
    }
    o.sparsity = max_distinct;
    o.entry_bound = static_cast<double>(max_count);
    return o;
}

}  // namespace fermiblock
