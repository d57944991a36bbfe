#include "fermiblock/hadamard.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fermiblock/chebyshev.hpp"
#include "fermiblock/rng.hpp"

namespace fermiblock {

std::uint64_t hadamard_sample_count(double eps2, double delta, double chernoff_constant) {
    if (eps2 <= 0.0 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("hadamard_sample_count: need eps2 > 0, delta in (0, 1)");
    const double d = std::ceil(chernoff_constant / (eps2 * eps2) * std::log(4.0 / delta));
    auto n = static_cast<std::uint64_t>(d);
    return n % 2 == 0 ? n : n + 1;
}

EstimateResult estimate_entry(const BlockEncoding& be, Index i, Index j, double eps2,
                              double delta, std::uint64_t seed, double chernoff_constant) {
    const Index dim = be.block_dim();
    if (i >= dim || j >= dim) throw std::out_of_range("estimate_entry: index out of range");

    const cplx z = be.unitary(i, j);  // <0 i| U |0 j>, ancillas most significant
    const double p_re = 0.5 + 0.5 * z.real();
    const double p_im = 0.5 - 0.5 * z.imag();

    const std::uint64_t total = hadamard_sample_count(eps2, delta, chernoff_constant);
    const std::uint64_t half = total / 2;
    CounterRng rng(seed);
    std::uint64_t hits_re = 0, hits_im = 0;
    for (std::uint64_t s = 0; s < half; ++s) hits_re += rng.bernoulli(p_re);
    for (std::uint64_t s = 0; s < half; ++s) hits_im += rng.bernoulli(p_im);

    const double re_hat = 2.0 * static_cast<double>(hits_re) / half - 1.0;
    const double im_hat = 1.0 - 2.0 * static_cast<double>(hits_im) / half;

    EstimateResult r;
    r.value = be.alpha * cplx(re_hat, im_hat);
    r.eps1 = be.eps;
    r.eps2 = eps2;
    r.delta = delta;
    r.samples = total;
    r.alpha = be.alpha;
    return r;
}

cplx estimate_entry_exact(const BlockEncoding& be, Index i, Index j) {
    const Index dim = be.block_dim();
    if (i >= dim || j >= dim) throw std::out_of_range("estimate_entry_exact: index out of range");
    return be.alpha * be.unitary(i, j);
}

std::vector<std::pair<Index, Index>> enumerate_terms(const OracleTuple& oracle_h) {
    std::vector<std::pair<Index, Index>> terms;
    const Index dim = oracle_h.dim();
    for (Index i = 0; i < dim; ++i)
        for (Index j : oracle_h.row(i))
            if (j >= i) terms.emplace_back(i, j);
    return terms;
}

double term_expectation(const OracleTuple& oracle_h, const MatrixXcd& m, Index i, Index j) {
    const cplx h = oracle_h.entry(i, j);
    if (i == j) return (h * m(i, i)).real();
    return 2.0 * (h * m(j, i)).real();
}

std::uint64_t energy_sample_count(double eps, double delta) {
    if (eps <= 0.0 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("energy_sample_count: need eps > 0, delta in (0, 1)");
    return static_cast<std::uint64_t>(std::ceil(8.0 / (eps * eps) * std::log(2.0 / delta)));
}

double estimate_energy_density(const BlockEncoding& be_m, const OracleTuple& oracle_h,
                               double eps, double delta, std::uint64_t seed) {
    const auto terms = enumerate_terms(oracle_h);
    if (terms.empty()) throw std::invalid_argument("estimate_energy_density: no terms (K = 0)");
    const MatrixXcd m = extract_block(be_m);

    const auto samples = energy_sample_count(eps, delta);
    CounterRng rng(seed);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const auto& [i, j] = terms[rng.below(terms.size())];
        acc += term_expectation(oracle_h, m, i, j);
    }
    return acc / static_cast<double>(samples);
}

double energy_density_exact(const BlockEncoding& be_m, const OracleTuple& oracle_h) {
    const auto terms = enumerate_terms(oracle_h);
    if (terms.empty()) throw std::invalid_argument("energy_density_exact: no terms (K = 0)");
    const MatrixXcd m = extract_block(be_m);
    double acc = 0.0;
    for (const auto& [i, j] : terms) acc += term_expectation(oracle_h, m, i, j);
    return acc / static_cast<double>(terms.size());
}

double particle_density(const BlockEncoding& be_m, std::uint64_t samples, std::uint64_t seed) {
    const MatrixXcd m = extract_block(be_m);
    const Index dim = be_m.block_dim();
    if (samples == 0) {
        double acc = 0.0;
        for (Index k = 0; k < dim; ++k) acc += m(k, k).real();
        return acc / static_cast<double>(dim);
    }
    CounterRng rng(seed);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Index k = rng.below(dim);
        acc += m(k, k).real();
    }
    return acc / static_cast<double>(samples);
}

cplx wick_quartic(const MatrixXcd& m, Index i, Index j, Index k, Index l) {
    return m(i, l) * m(j, k) - m(i, k) * m(j, l);
}

double free_energy_density(const OracleTuple& oracle_h, double beta, int degree,
                           std::uint64_t samples, std::uint64_t seed,
                           std::optional<double> tolerance, int cap) {
    if (beta <= 0.0) throw std::invalid_argument("free_energy_density: beta must be > 0");
    const double s = oracle_h.normalization();
    auto approx = log_fermi_approx(beta, s, degree);
    if (tolerance && approx.certified_bound > *tolerance)
        throw std::runtime_error("free_energy_density: degree insufficient for tolerance");

    // rescale so |p| <= 1/2; alpha compensates
    const double c = beta * s;
    const double max_val = c + std::log1p(std::exp(-c));  // log(1 + e^c)
    const double lambda = 2.0 * (max_val + approx.certified_bound + 1e-9);
    auto scaled = approx.scaled(cplx(1.0 / lambda, 0.0));

    BlockEncoding be_h = encode_sparse(oracle_h, cap);
    BlockEncoding be = apply_polynomial(be_h, scaled);
    be.alpha = lambda;

    const MatrixXcd block = extract_block(be);  // approx log(I + e^{-beta h})
    const Index dim = be.block_dim();
    double mean;
    if (samples == 0) {
        double acc = 0.0;
        for (Index k = 0; k < dim; ++k) acc += block(k, k).real();
        mean = acc / static_cast<double>(dim);
    } else {
        CounterRng rng(seed);
        double acc = 0.0;
        for (std::uint64_t t = 0; t < samples; ++t) {
            const Index k = rng.below(dim);
            acc += block(k, k).real();
        }
        mean = acc / static_cast<double>(samples);
    }
    return -mean / beta;
}

double exact_free_energy_density(const MatrixXcd& h, double beta) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        const double u = -beta * es.eigenvalues()(k);
        acc += u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    }
    return -acc / (beta * static_cast<double>(h.rows()));
}

}  // namespace fermiblock
