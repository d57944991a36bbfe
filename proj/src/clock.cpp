#include "fermiblock/clock.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "fermiblock/block_encoding.hpp"
#include "fermiblock/correlation.hpp"
#include "fermiblock/hadamard.hpp"

namespace fermiblock {

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Matrix2cd named_1q(const std::string& name) {
    Eigen::Matrix2cd g;
    if (name == "H") {
        const double s = 1.0 / std::sqrt(2.0);
        g << s, s, s, -s;
    } else if (name == "X") {
        g << 0, 1, 1, 0;
    } else if (name == "T") {
        g << 1, 0, 0, std::exp(cplx(0.0, kPi / 4.0));
    } else {
        throw std::invalid_argument("unknown 1-qubit gate " + name);
    }
    return g;
}

}  // namespace

void GateList::validate() const {
    if (qubits < 2) throw std::invalid_argument("GateList: need at least 2 circuit qubits");
    for (const auto& g : gates) {
        if (g.q1 < 1 || g.q2 <= g.q1 || g.q2 > qubits)
            throw std::invalid_argument("GateList: gate qubit indices out of range");
        const double defect =
            (g.u.adjoint() * g.u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
        if (defect > 1e-12) throw std::invalid_argument("GateList: gate is not unitary");
    }
}

GateList GateList::padded() const {
    GateList out = *this;
    while (!is_pow2(static_cast<Index>(out.length()) + 1)) {
        Gate id;
        id.q1 = 1;
        id.q2 = 2;
        id.u = Eigen::Matrix4cd::Identity();
        out.gates.push_back(id);
    }
    return out;
}

GateList parse_gate_list(const std::string& text) {
    GateList gl;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_qubits = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("gate list line " + std::to_string(lineno) + ": " + msg);
        };
        if (head == "qubits") {
            if (!(ls >> gl.qubits)) fail("qubits N");
            have_qubits = true;
            continue;
        }
        if (!have_qubits) fail("qubits header must come first");
        Gate g;
        if (head == "H" || head == "X" || head == "T") {
            int k = 0;
            if (!(ls >> k)) fail(head + " k");
            if (k < 1 || k > gl.qubits) fail("qubit index out of range");
            const auto g1 = named_1q(head);
            if (k < gl.qubits) {
                g.q1 = k;
                g.q2 = k + 1;
                g.u = kron2(g1, Eigen::Matrix2cd::Identity());
            } else {
                g.q1 = k - 1;
                g.q2 = k;
                g.u = kron2(Eigen::Matrix2cd::Identity(), g1);
            }
        } else if (head == "CNOT") {
            int c = 0, t = 0;
            if (!(ls >> c >> t)) fail("CNOT control target");
            if (c == t || c < 1 || t < 1 || c > gl.qubits || t > gl.qubits)
                fail("CNOT qubit indices invalid");
            g.q1 = std::min(c, t);
            g.q2 = std::max(c, t);
            g.u = Eigen::Matrix4cd::Zero();
            // basis (bit of q1, bit of q2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    const int ctrl = (c == g.q1) ? b1 : b2;
                    int o1 = b1, o2 = b2;
                    if (ctrl) {
                        if (t == g.q1)
                            o1 ^= 1;
                        else
                            o2 ^= 1;
                    }
                    g.u(2 * o1 + o2, 2 * b1 + b2) = 1.0;
                }
        } else if (head == "U") {
            if (!(ls >> g.q1 >> g.q2)) fail("U q1 q2 <16 complex pairs>");
            for (int r = 0; r < 4; ++r)
                for (int cidx = 0; cidx < 4; ++cidx) {
                    double re = 0.0, im = 0.0;
                    if (!(ls >> re >> im)) fail("U needs 16 complex pairs");
                    g.u(r, cidx) = {re, im};
                }
        } else {
            fail("unknown gate '" + head + "'");
        }
        gl.gates.push_back(g);
    }
    if (!have_qubits) throw std::invalid_argument("gate list: missing qubits header");
    gl.validate();
    return gl;
}

namespace {

struct ClockModel {
    GateList gates;  // padded
    int q_clock = 0;
    int q = 0;

    Index dim() const { return Index{1} << (q_clock + q); }
    Index clock_of(Index i) const { return i >> q; }
    Index state_of(Index i) const { return i & ((Index{1} << q) - 1); }

    int bit(Index x, int qubit) const {  // qubit 1 = MSB
        return static_cast<int>((x >> (q - qubit)) & 1);
    }
    Index with_pair(Index x, int q1, int q2, int b1, int b2) const {
        Index y = x;
        const Index m1 = Index{1} << (q - q1), m2 = Index{1} << (q - q2);
        y = b1 ? (y | m1) : (y & ~m1);
        y = b2 ? (y | m2) : (y & ~m2);
        return y;
    }

    // h[(l, x), (l', y)]
    cplx entry(Index i, Index j) const {
        const Index li = clock_of(i) + 1, lj = clock_of(j) + 1;
        const Index x = state_of(i), y = state_of(j);
        const int big_l = gates.length();
        if (lj + 1 == li && li >= 2) {
            // |l><l-1| (x) W_{l-1}
            const Gate& g = gates.gates[li - 2];
            if (with_pair(x, g.q1, g.q2, 0, 0) != with_pair(y, g.q1, g.q2, 0, 0)) return 0.0;
            return g.u(2 * bit(x, g.q1) + bit(x, g.q2), 2 * bit(y, g.q1) + bit(y, g.q2));
        }
        if (lj == li + 1 && li <= static_cast<Index>(big_l)) {
            // |l><l+1| (x) W_l^dag
            const Gate& g = gates.gates[li - 1];
            if (with_pair(x, g.q1, g.q2, 0, 0) != with_pair(y, g.q1, g.q2, 0, 0)) return 0.0;
            return std::conj(g.u(2 * bit(y, g.q1) + bit(y, g.q2), 2 * bit(x, g.q1) + bit(x, g.q2)));
        }
        return 0.0;
    }

    std::vector<Index> row(Index i) const {
        const Index li = clock_of(i) + 1;
        const Index x = state_of(i);
        const int big_l = gates.length();
        std::vector<Index> cols;
        auto push_variants = [&](Index clock, const Gate& g) {
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    const Index y = with_pair(x, g.q1, g.q2, b1, b2);
                    const Index j = (clock << q) | y;
                    if (entry(i, j) != cplx{0.0, 0.0}) cols.push_back(j);
                }
        };
        if (li >= 2) push_variants(li - 2, gates.gates[li - 2]);
        if (li <= static_cast<Index>(big_l)) push_variants(li, gates.gates[li - 1]);
        std::sort(cols.begin(), cols.end());
        return cols;
    }
};

}  // namespace

OracleTuple build_clock_hamiltonian(const GateList& gates) {
    gates.validate();
    auto model = std::make_shared<ClockModel>();
    model->gates = gates.padded();
    model->q = gates.qubits;
    model->q_clock = log2_exact(static_cast<Index>(model->gates.length()) + 1);

    OracleTuple o;
    o.n = model->q_clock + model->q;
    o.label = "clock(L=" + std::to_string(model->gates.length()) +
              ",q=" + std::to_string(model->q) + ")";
    o.row = [model](Index i) { return model->row(i); };
    o.entry = [model](Index i, Index j) { return model->entry(i, j); };

    if (o.n <= 14) {
        size_t s = 1;
        for (Index i = 0; i < o.dim(); ++i) s = std::max(s, model->row(i).size());
        o.sparsity = static_cast<int>(s);
    } else {
        o.sparsity = 8;
    }
    return o;
}

ChainSpectrum hopping_chain(int chain_len) {
    if (chain_len < 1) throw std::invalid_argument("hopping_chain: L must be >= 1");
    const int dim = chain_len + 1;
    ChainSpectrum cs;
    cs.j = MatrixXd::Zero(dim, dim);
    for (int a = 0; a + 1 < dim; ++a) {
        cs.j(a, a + 1) = 1.0;
        cs.j(a + 1, a) = 1.0;
    }
    cs.eigenvalues.resize(dim);
    cs.eigenvectors.resize(dim, dim);
    const double m = chain_len + 2.0;
    for (int k = 1; k <= dim; ++k) {
        cs.eigenvalues(k - 1) = 2.0 * std::cos(kPi * k / m);
        for (int jj = 1; jj <= dim; ++jj)
            cs.eigenvectors(jj - 1, k - 1) = std::sqrt(2.0 / m) * std::sin(kPi * jj * k / m);
    }
    return cs;
}

double overlap_probe(int chain_len, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("overlap_probe: t must be finite");
    const auto cs = hopping_chain(chain_len);
    const int dim = chain_len + 1;
    cplx amp{0.0, 0.0};
    for (int k = 0; k < dim; ++k)
        amp += std::exp(cplx(0.0, -cs.eigenvalues(k) * t)) * cs.eigenvectors(dim - 1, k) *
               cs.eigenvectors(0, k);
    return std::norm(amp);
}

double default_average_window(int chain_len) {
    const double m = chain_len + 2.0;
    return 4.0 * m * m * std::log(2.0 * m);
}

std::uint64_t default_average_points(int chain_len, double window) {
    const double m = chain_len + 2.0;
    // spacing <= pi/16 keeps every eigenvalue gap (at most 4) alias-free
    const double alias_pts = std::ceil(window / (kPi / 16.0));
    return static_cast<std::uint64_t>(std::max(8.0 * m * m, alias_pts));
}

double randomized_time_average(int chain_len, double window, std::uint64_t npoints) {
    if (window <= 0.0 || npoints == 0)
        throw std::invalid_argument("randomized_time_average: need window > 0, npoints > 0");
    double acc = 0.0;
    for (std::uint64_t p = 0; p < npoints; ++p) {
        const double t = window * (static_cast<double>(p) + 0.5) / static_cast<double>(npoints);
        acc += overlap_probe(chain_len, t);
    }
    return acc / static_cast<double>(npoints);
}

double randomized_time_average(int chain_len) {
    const double window = default_average_window(chain_len);
    return randomized_time_average(chain_len, window, default_average_points(chain_len, window));
}

std::vector<int> theorem1_m0_occupation(const GateList& padded_gates) {
    const int q = padded_gates.qubits;
    const int q_clock = log2_exact(static_cast<Index>(padded_gates.length()) + 1);
    const Index dim = Index{1} << (q_clock + q);
    const Index final_clock = (Index{1} << q_clock) - 1;  // l = L+1
    std::vector<int> occ(dim, 0);
    for (Index i = 0; i < dim; ++i) {
        const Index c = i >> q;
        const Index x = i & ((Index{1} << q) - 1);
        const int qubit1 = static_cast<int>((x >> (q - 1)) & 1);
        occ[i] = (c == final_clock && qubit1 == 1) ? 1 : 0;
    }
    return occ;
}

Theorem1Result theorem1_instance(const GateList& gates, double t, double eps2, double delta,
                                 std::uint64_t seed) {
    const GateList padded = gates.padded();
    const OracleTuple oracle_h = build_clock_hamiltonian(gates);
    if (oracle_h.n > 12)
        throw std::invalid_argument("theorem1_instance: q_clock + q exceeds the desk-scale cap");

    const auto occ = theorem1_m0_occupation(padded);
    const OracleTuple m0_oracle = build_diagonal_projector(oracle_h.n, occ);
    const BlockEncoding be_m0 = encode_sparse(m0_oracle);
    const BlockEncoding be_mt = time_evolved_correlation(oracle_h, be_m0, t, t);

    const Index probe = 0;  // (l = 1, x = 0...0)
    const auto est = estimate_entry(be_mt, probe, probe, eps2, delta, seed);

    MatrixXcd m0 = MatrixXcd::Zero(oracle_h.dim(), oracle_h.dim());
    for (Index i = 0; i < oracle_h.dim(); ++i) m0(i, i) = occ[i];
    const MatrixXcd exact = exact_evolved(materialize(oracle_h), m0, t, t);

    Theorem1Result r;
    r.estimate = est.value;
    r.exact = exact(probe, probe).real();
    r.eps1 = est.eps1;
    r.eps2 = est.eps2;
    r.delta = est.delta;
    r.samples = est.samples;
    r.n_total = oracle_h.n;
    r.q_clock = log2_exact(static_cast<Index>(padded.length()) + 1);
    return r;
}

}  // namespace fermiblock
