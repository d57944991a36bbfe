#include "fermiblock/block_encoding.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace fermiblock {

namespace {

// Embed U acting on (top_bits, low_bits) into (top_bits, mid_bits, low_bits),
// identity on the middle register.
MatrixXcd embed_middle(const MatrixXcd& u, int top_bits, int mid_bits, int low_bits) {
    const Index top = Index{1} << top_bits;
    const Index mid = Index{1} << mid_bits;
    const Index low = Index{1} << low_bits;
    MatrixXcd out = MatrixXcd::Zero(top * mid * low, top * mid * low);
    for (Index a = 0; a < top; ++a)
        for (Index ap = 0; ap < top; ++ap)
            for (Index s = 0; s < low; ++s)
                for (Index sp = 0; sp < low; ++sp) {
                    const cplx val = u(a * low + s, ap * low + sp);
                    if (val == cplx{0.0, 0.0}) continue;
                    for (Index b = 0; b < mid; ++b)
                        out((a * mid + b) * low + s, (ap * mid + b) * low + sp) = val;
                }
    return out;
}

}  // namespace

double BlockEncoding::unitarity_defect() const {
    const MatrixXcd g = unitary.adjoint() * unitary - MatrixXcd::Identity(unitary.rows(), unitary.cols());
    return g.operatorNorm();
}

std::string BlockEncoding::resource_report() const {
    std::ostringstream os;
    os << "block-encoding " << provenance << "\n";
    os << "  declared: alpha=" << alpha << " m=" << m << " eps=" << eps << "\n";
    os << "  reference path: dense unitary on " << (n + m) << " qubits ("
       << unitary.rows() << "x" << unitary.cols() << ")\n";
    os << "  emulated circuit ancillas: " << emulated_ancillas << "\n";
    if (!resource_note.empty()) os << "  " << resource_note << "\n";
    return os.str();
}

BlockEncoding dilate(const MatrixXcd& a, const std::string& provenance) {
    if (a.rows() != a.cols()) throw std::invalid_argument("dilate: matrix must be square");
    const Index dim = static_cast<Index>(a.rows());
    if (!is_pow2(dim)) throw std::invalid_argument("dilate: dimension must be a power of two");

    Eigen::BDCSVD<MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    if (sv.size() > 0 && sv(0) > 1.0 + 1e-10)
        throw std::invalid_argument("dilate: ||A|| = " + std::to_string(sv(0)) + " exceeds 1");

    // sqrt(1 - sigma^2) with clamping against rounding above 1
    VectorXd comp(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double s2 = std::min(1.0, sv(k) * sv(k));
        comp(k) = std::sqrt(1.0 - s2);
    }
    const MatrixXcd s1 = svd.matrixU() * comp.asDiagonal() * svd.matrixU().adjoint();
    const MatrixXcd s2 = svd.matrixV() * comp.asDiagonal() * svd.matrixV().adjoint();

    BlockEncoding be;
    be.n = log2_exact(dim);
    be.m = 1;
    be.alpha = 1.0;
    be.eps = 0.0;
    be.provenance = provenance;
    be.emulated_ancillas = 1;
    be.unitary = MatrixXcd::Zero(2 * dim, 2 * dim);
    be.unitary.topLeftCorner(dim, dim) = a;
    be.unitary.topRightCorner(dim, dim) = s1;
    be.unitary.bottomLeftCorner(dim, dim) = s2;
    be.unitary.bottomRightCorner(dim, dim) = -a.adjoint();
    return be;
}

BlockEncoding encode_sparse(const OracleTuple& oracle, int cap) {
    const MatrixXcd h = materialize(oracle, cap);
    const double alpha = oracle.normalization();
    BlockEncoding be = dilate(h / alpha, "sparse[" + oracle.label + "]");
    be.alpha = alpha;
    be.emulated_ancillas = oracle.n + 3;
    std::ostringstream note;
    note << "oracle calls O(1) per use; s=" << oracle.sparsity
         << " entry_bound=" << oracle.entry_bound;
    be.resource_note = note.str();
    return be;
}

MatrixXcd extract_block(const BlockEncoding& be) {
    const Index dim = be.block_dim();
    return be.alpha * be.unitary.topLeftCorner(dim, dim);
}

BlockEncoding apply_polynomial(const BlockEncoding& be_h, const ChebyshevApprox& approx,
                               double delta_qsvt) {
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        if (std::abs(approx.eval(x)) > 0.5 + 1e-12)
            throw std::invalid_argument("apply_polynomial: |p| > 1/2 on [-1, 1]");
    }
    const Index dim = be_h.block_dim();
    const MatrixXcd block = be_h.unitary.topLeftCorner(dim, dim);
    if ((block - block.adjoint()).operatorNorm() > 1e-10)
        throw std::invalid_argument("apply_polynomial: encoded block is not Hermitian");

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((block + block.adjoint()) / 2.0);
    VectorXcd pvals(dim);
    for (Index k = 0; k < dim; ++k) {
        const double lam = std::clamp(es.eigenvalues()(k), -1.0, 1.0);
        pvals(k) = approx.eval(lam);
    }
    const MatrixXcd image =
        es.eigenvectors() * pvals.asDiagonal() * es.eigenvectors().adjoint();

    BlockEncoding be = dilate(image, "poly[" + approx.target + "]o" + be_h.provenance);
    be.eps = (be_h.eps > 0.0 ? 4.0 * approx.degree * std::sqrt(be_h.eps / be_h.alpha) : 0.0) +
             delta_qsvt;
    be.emulated_ancillas = be_h.n + 5;
    std::ostringstream note;
    note << "degree d=" << approx.degree << "; <= d oracle-tuple calls per use";
    be.resource_note = note.str();
    return be;
}

double oracle_eps_for_poly_budget(double eps_ph, int degree, double alpha) {
    if (eps_ph < 0.0 || degree < 1 || alpha <= 0.0)
        throw std::invalid_argument("oracle_eps_for_poly_budget: bad arguments");
    return alpha * eps_ph * eps_ph / (16.0 * static_cast<double>(degree) * degree);
}

BlockEncoding evolve(const BlockEncoding& be_h, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("evolve: t must be finite");
    const MatrixXcd h = extract_block(be_h);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((h + h.adjoint()) / 2.0);
    const Index dim = be_h.block_dim();
    VectorXcd phases(dim);
    for (Index k = 0; k < dim; ++k)
        phases(k) = std::exp(cplx(0.0, t * es.eigenvalues()(k)));
    const MatrixXcd u_t = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    BlockEncoding be;
    be.n = be_h.n;
    be.m = 1;
    be.alpha = 1.0;
    be.eps = 2.0 * std::abs(t) * be_h.eps;
    be.provenance = "evolve[t=" + std::to_string(t) + "]o" + be_h.provenance;
    be.emulated_ancillas = be_h.n + 5;
    // a unitary dilates with zero complement blocks
    be.unitary = MatrixXcd::Zero(2 * dim, 2 * dim);
    be.unitary.topLeftCorner(dim, dim) = u_t;
    be.unitary.bottomRightCorner(dim, dim) = -u_t.adjoint();
    std::ostringstream note;
    note << "O(s|t| + log(1/eps)) oracle-tuple calls, t=" << t;
    be.resource_note = note.str();
    return be;
}

BlockEncoding evolve(const OracleTuple& oracle, double t, int cap) {
    return evolve(encode_sparse(oracle, cap), t);
}

BlockEncoding multiply(const BlockEncoding& a, const BlockEncoding& b) {
    if (a.n != b.n) throw std::invalid_argument("multiply: system dimension mismatch");

    BlockEncoding be;
    be.n = a.n;
    be.m = a.m + b.m;
    be.alpha = a.alpha * b.alpha;
    be.eps = a.alpha * b.eps + b.alpha * a.eps;
    be.provenance = "(" + a.provenance + ")*(" + b.provenance + ")";
    be.emulated_ancillas = a.emulated_ancillas + b.emulated_ancillas;
    // ancilla order (anc_a, anc_b, system); each factor acts on its own block
    const MatrixXcd ua = embed_middle(a.unitary, a.m, b.m, a.n);
    const Index dim_b = Index{1} << (b.m + b.n);
    MatrixXcd ub = MatrixXcd::Zero(ua.rows(), ua.cols());
    const Index rep = Index{1} << a.m;
    for (Index blk = 0; blk < rep; ++blk)
        ub.block(blk * dim_b, blk * dim_b, dim_b, dim_b) = b.unitary;
    be.unitary = ua * ub;
    return be;
}

}  // namespace fermiblock
