#include "fermiblock/correlation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "fermiblock/chebyshev.hpp"

namespace fermiblock {

BlockEncoding thermal_correlation(const OracleTuple& oracle_h, double beta, int degree,
                                  std::optional<double> target_eps_pa, double delta_qsvt,
                                  int cap) {
    if (beta < 0.0) throw std::invalid_argument("thermal_correlation: beta must be >= 0");
    const double s = oracle_h.normalization();
    const double c = beta * s;
    auto approx = fermi_dirac_approx(c, degree);
    const double cert_quarter = approx.certified_bound;
    if (target_eps_pa && 4.0 * cert_quarter > *target_eps_pa + 1e-15) {
        std::ostringstream msg;
        msg << "thermal_correlation: degree " << degree << " certifies eps_PA = "
            << 4.0 * cert_quarter << " > target " << *target_eps_pa;
        throw std::runtime_error(msg.str());
    }

    BlockEncoding be_h = encode_sparse(oracle_h, cap);
    BlockEncoding be = apply_polynomial(be_h, approx, delta_qsvt);
    const double eps_ph = be.eps - delta_qsvt;

    be.alpha = 4.0;  // block stores (1/4) M
    be.budget.eps_PA = 4.0 * cert_quarter;
    be.budget.eps_ph = 4.0 * eps_ph;
    be.budget.delta_qsvt = 4.0 * delta_qsvt;
    be.eps = be.budget.total();
    be.provenance = "thermal[beta=" + std::to_string(beta) + "]";
    be.emulated_ancillas = oracle_h.n + 5;
    std::ostringstream note;
    if (c >= 2.0 * kPi)
        note << "oracle calls Theta(beta^4 s^4 / eps_PA) = "
             << std::pow(c, 4) / std::max(be.budget.eps_PA, 1e-300);
    else
        note << "oracle calls Theta(beta^2 s^2 / eps_PA) = "
             << c * c / std::max(be.budget.eps_PA, 1e-300);
    note << "; degree used d=" << degree;
    be.resource_note = note.str();
    return be;
}

int thermal_degree_for(const OracleTuple& oracle_h, double beta, double eps_pa) {
    return fermi_degree_for(beta * oracle_h.normalization(), eps_pa / 4.0);
}

BlockEncoding time_evolved_correlation(const OracleTuple& oracle_h, const BlockEncoding& be_m0,
                                       double t1, double t2, int cap) {
    BlockEncoding be_h = encode_sparse(oracle_h, cap);
    BlockEncoding e1 = evolve(be_h, t1);
    BlockEncoding e2 = evolve(be_h, -t2);
    BlockEncoding be = multiply(e1, multiply(be_m0, e2));
    be.budget = be_m0.budget;
    be.budget.eps_M = be_m0.eps;
    be.budget.eps_ph += 2.0 * be_m0.alpha * be_h.eps * (std::abs(t1) + std::abs(t2));
    be.eps = be.budget.total();
    std::ostringstream prov;
    prov << "evolved[t1=" << t1 << ",t2=" << t2 << "]o" << be_m0.provenance;
    be.provenance = prov.str();
    be.emulated_ancillas = 2 * oracle_h.n + be_m0.emulated_ancillas + 10;
    std::ostringstream note;
    note << "O(s(|t1|+|t2|) + log terms) oracle-tuple calls; one use of U_M0";
    be.resource_note = note.str();
    return be;
}

BlockEncoding greens_fourier(const OracleTuple& oracle_h, double beta, double eta, double omega,
                             int degree, double delta_qsvt, int cap) {
    if (eta <= 0.0) throw std::invalid_argument("greens_fourier: eta must be > 0");
    const double s = oracle_h.normalization();
    auto approx = greens_scalar_approx(beta, s, eta, omega, degree);
    const double cert_scaled = approx.certified_bound;  // at the eta/8 level

    BlockEncoding be_h = encode_sparse(oracle_h, cap);
    BlockEncoding be = apply_polynomial(be_h, approx, delta_qsvt);
    const double eps_ph = be.eps - delta_qsvt;

    const double scale = 8.0 / eta;
    be.alpha = scale;
    be.budget.eps_PA = scale * cert_scaled;
    be.budget.eps_ph = scale * eps_ph;
    be.budget.delta_qsvt = scale * delta_qsvt;
    be.eps = be.budget.total();
    std::ostringstream prov;
    prov << "greens[beta=" << beta << ",eta=" << eta << ",omega=" << omega << "]";
    be.provenance = prov.str();
    be.emulated_ancillas = oracle_h.n + 5;
    const double c = beta * s;
    std::ostringstream note;
    note << "oracle calls ";
    if (c >= 2.0 * kPi)
        note << "Theta((beta s)^4/eps_PA)";
    else
        note << "Theta((beta s)^2/eps_PA)";
    note << " + ";
    if (2.0 * s / eta >= 1.0)
        note << "Theta(s^4/(eta^4 eps_PA))";
    else
        note << "Theta(s^2/(eta^2 eps_PA))";
    note << "; degree used d=" << degree;
    be.resource_note = note.str();
    return be;
}

MatrixXcd exact_thermal(const MatrixXcd& h, double beta) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXd occ(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        occ(k) = logistic_neg(beta * es.eigenvalues()(k));
    return es.eigenvectors() * occ.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd exact_evolved(const MatrixXcd& h, const MatrixXcd& m0, double t1, double t2) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    const Eigen::Index dim = h.rows();
    VectorXcd ph1(dim), ph2(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        ph1(k) = std::exp(cplx(0.0, t1 * es.eigenvalues()(k)));
        ph2(k) = std::exp(cplx(0.0, -t2 * es.eigenvalues()(k)));
    }
    const MatrixXcd u1 = es.eigenvectors() * ph1.asDiagonal() * es.eigenvectors().adjoint();
    const MatrixXcd u2 = es.eigenvectors() * ph2.asDiagonal() * es.eigenvectors().adjoint();
    return u1 * m0 * u2;
}

MatrixXcd exact_greens(const MatrixXcd& h, double beta, double eta, double omega) {
    if (eta <= 0.0) throw std::invalid_argument("exact_greens: eta must be > 0");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXcd g(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        const double lam = es.eigenvalues()(k);
        const double f = logistic_neg(beta * lam);
        g(k) = (1.0 - f) / (cplx(0.0, eta) - (lam + omega)) -
               f / (cplx(0.0, eta) + (lam + omega));
    }
    return es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd momentum_transform(const MatrixXcd& m, const std::vector<std::int64_t>& dims,
                             int orbitals) {
    std::int64_t n_sites = 1;
    for (auto d : dims) n_sites *= d;
    if (n_sites * orbitals != m.rows() || m.rows() != m.cols())
        throw std::invalid_argument("momentum_transform: dims product mismatch");

    MatrixXcd f = MatrixXcd::Identity(1, 1);
    for (auto L : dims) {
        MatrixXcd dft(L, L);
        const double norm = 1.0 / std::sqrt(static_cast<double>(L));
        for (std::int64_t j = 0; j < L; ++j)
            for (std::int64_t k = 0; k < L; ++k)
                dft(j, k) = norm * std::exp(cplx(0.0, -2.0 * kPi * j * k / L));
        MatrixXcd next(f.rows() * L, f.cols() * L);
        for (Eigen::Index a = 0; a < f.rows(); ++a)
            for (Eigen::Index b = 0; b < f.cols(); ++b)
                next.block(a * L, b * L, L, L) = f(a, b) * dft;
        f = std::move(next);
    }
    if (orbitals > 1) {
        MatrixXcd next = MatrixXcd::Zero(f.rows() * orbitals, f.cols() * orbitals);
        for (Eigen::Index a = 0; a < f.rows(); ++a)
            for (Eigen::Index b = 0; b < f.cols(); ++b)
                for (int o = 0; o < orbitals; ++o)
                    next(a * orbitals + o, b * orbitals + o) = f(a, b);
        f = std::move(next);
    }
    return f * m * f.adjoint();
}

}  // namespace fermiblock
