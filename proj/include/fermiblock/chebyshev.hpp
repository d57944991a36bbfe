#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fermiblock/types.hpp"

namespace fermiblock {

/// Bernstein ellipse data for an analytic target: |f| <= modulus_bound on
/// the ellipse E_r, giving the certificate 2 C r^-d / (r - 1).
struct BernsteinEllipse {
    double r = 1.0;
    double modulus_bound = 1.0;
};

/// Chebyshev-basis polynomial sum a_k T_k(x) with a certified sup-norm error
/// bound against its target on [-1, 1]. Immutable; evaluation is Clenshaw.
struct ChebyshevApprox {
    std::vector<cplx> coeffs;   // a_0 .. a_degree
    int degree = 0;
    std::string target;
    double certified_bound = 0.0;
    std::string bound_provenance;  // "analytic"|"analytic+fp"|"measured"|"formula"

    cplx eval(double x) const;
    ChebyshevApprox scaled(cplx factor) const;

    std::string to_text() const;
    static ChebyshevApprox from_text(const std::string& text);
};

/// Coefficients by Chebyshev-Gauss quadrature at >= 4(d+1) nodes. With an
/// ellipse the certificate is analytic (plus a Clenshaw roundoff term);
/// otherwise the bound is measured on a 10^4-point grid. Throws if f is
/// non-finite at a node.
ChebyshevApprox chebyshev_fit(const std::function<cplx(double)>& f, int d,
                              const std::string& target_desc = "custom",
                              std::optional<BernsteinEllipse> ellipse = std::nullopt);

/// Quarter-scaled Fermi-Dirac target f(x) = (1/4) / (1 + e^{c x}). The
/// certificate is the explicit value (12/d)(c/pi)^4 for c >= 2*pi and
/// (40/d)(c/pi)^2 otherwise.
ChebyshevApprox fermi_dirac_approx(double c, int d);
double fermi_dirac_bound(double c, int d);
/// Smallest degree whose certificate is <= eps.
int fermi_degree_for(double c, double eps);

/// Target (eta/8) g(x) with
///   g(x) = (1 - f(x)) / (i eta - (s x + omega)) - f(x) / (i eta + (s x + omega)),
/// f the (unscaled) Fermi factor at c = beta*s. Built as a product of
/// half-degree pieces; d must be even. The certificate sums a Fermi bracket
/// at degree d/2 and the resolvent bracket 128/d (s/eta)^4 (2s/eta >= 1) or
/// 32/d (s/eta)^2.
ChebyshevApprox greens_scalar_approx(double beta, double s, double eta, double omega, int d);
double greens_fermi_bracket(double beta, double s, int d);
double greens_resolvent_bracket(double s, double eta, int d);
int greens_degree_for(double beta, double s, double eta, double eps);

/// Monomial-basis truncated series for e^{i t x}: coefficients (it)^k / k!.
struct TaylorPoly {
    std::vector<cplx> coeffs;  // monomial basis
    double t = 0.0;
    int order = 0;
    double instantiated_bound = 0.0;  // (|t|/sqrt(K))^{K+1}, constant 1
    double tail_bound = 0.0;          // analytic series tail

    cplx eval(double x) const;  // Horner
};
TaylorPoly exp_taylor(double t, int K);

/// Target log(1 + e^{-beta*s*x}); certificate via the Fermi-Dirac ellipse
/// with modulus bound C = log(1 + e^{1.5*beta*s}), plus a roundoff term.
ChebyshevApprox log_fermi_approx(double beta, double s, int d);

/// Clenshaw evaluation; identical to approx.eval.
cplx eval_poly(const ChebyshevApprox& approx, double x);

/// Max |approx(x) - f(x)| over a uniform grid on [-1, 1].
double measured_sup_error(const ChebyshevApprox& approx, const std::function<cplx(double)>& f,
                          int npoints = 10000);

/// Numerically stable 1 / (1 + e^u).
double logistic_neg(double u);

}  // namespace fermiblock
