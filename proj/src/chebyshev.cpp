#include "fermiblock/chebyshev.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fermiblock {

namespace {

// In-place iterative radix-2 FFT, n a power of two.
void fft(std::vector<cplx>& a) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// DCT-II: out[k] = sum_j v[j] cos(pi k (2j+1) / (2n)), k = 0..kmax.
std::vector<double> dct2(const std::vector<double>& v, int kmax) {
    const size_t n = v.size();
    std::vector<double> out(kmax + 1, 0.0);
    if (n >= 1024 && (n & (n - 1)) == 0) {
        // Makhoul reordering: even samples ascending, odd samples descending
        std::vector<cplx> w(n);
        for (size_t j = 0; j < n / 2; ++j) {
            w[j] = v[2 * j];
            w[n - 1 - j] = v[2 * j + 1];
        }
        fft(w);
        for (int k = 0; k <= kmax; ++k) {
            const double ang = -kPi * k / (2.0 * static_cast<double>(n));
            out[k] = (w[k] * cplx(std::cos(ang), std::sin(ang))).real();
        }
    } else {
        for (int k = 0; k <= kmax; ++k) {
            double acc = 0.0;
            for (size_t j = 0; j < n; ++j)
                acc += v[j] * std::cos(kPi * k * (2.0 * j + 1.0) / (2.0 * n));
            out[k] = acc;
        }
    }
    return out;
}

double clenshaw_roundoff(const std::vector<cplx>& coeffs) {
    double sum_abs = 0.0;
    for (const auto& a : coeffs) sum_abs += std::abs(a);
    const double eps = std::numeric_limits<double>::epsilon();
    return eps * (4.0 * static_cast<double>(coeffs.size()) * sum_abs + 16.0);
}

// 2 C r^-d / (r - 1), evaluated in log space so large d underflows to zero
// instead of producing NaN.
double bernstein_bound(double r, double C, int d) {
    const double log_bound = std::log(2.0 * C) - d * std::log(r) - std::log(r - 1.0);
    if (log_bound < -745.0) return 0.0;
    return std::exp(log_bound);
}

}  // namespace

double logistic_neg(double u) {
    // 1 / (1 + e^u) without overflow
    if (u >= 0.0) {
        const double e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(u));
}

cplx ChebyshevApprox::eval(double x) const {
    cplx b1{0.0, 0.0}, b2{0.0, 0.0};
    for (int k = degree; k >= 1; --k) {
        cplx bk = 2.0 * x * b1 - b2 + coeffs[k];
        b2 = b1;
        b1 = bk;
    }
    return x * b1 - b2 + coeffs[0];
}

ChebyshevApprox ChebyshevApprox::scaled(cplx factor) const {
    ChebyshevApprox out = *this;
    for (auto& a : out.coeffs) a *= factor;
    out.certified_bound = certified_bound * std::abs(factor);
    out.target = target + "*" + std::to_string(std::abs(factor));
    return out;
}

std::string ChebyshevApprox::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "target " << target << "\n";
    os << "degree " << degree << "\n";
    os << "certified_bound " << certified_bound << "\n";
    os << "bound_provenance " << bound_provenance << "\n";
    os << "coeffs";
    for (const auto& a : coeffs) os << " " << a.real() << " " << a.imag();
    os << "\n";
    return os.str();
}

ChebyshevApprox ChebyshevApprox::from_text(const std::string& text) {
    ChebyshevApprox out;
    std::istringstream is(text);
    std::string key;
    while (is >> key) {
        if (key == "target") {
            std::string rest;
            std::getline(is, rest);
            out.target = rest.empty() ? rest : rest.substr(1);
        } else if (key == "degree") {
            is >> out.degree;
        } else if (key == "certified_bound") {
            is >> out.certified_bound;
        } else if (key == "bound_provenance") {
            is >> out.bound_provenance;
        } else if (key == "coeffs") {
            double re, im;
            while (is >> re >> im) out.coeffs.emplace_back(re, im);
        } else {
            throw std::invalid_argument("ChebyshevApprox::from_text: unknown key " + key);
        }
    }
    if (out.coeffs.size() != static_cast<size_t>(out.degree) + 1)
        throw std::invalid_argument("ChebyshevApprox::from_text: coefficient count mismatch");
    return out;
}

ChebyshevApprox chebyshev_fit(const std::function<cplx(double)>& f, int d,
                              const std::string& target_desc,
                              std::optional<BernsteinEllipse> ellipse) {
    if (d < 0) throw std::invalid_argument("chebyshev_fit: degree must be >= 0");
    const size_t nq = next_pow2(static_cast<Index>(4 * (d + 1)));

    std::vector<double> vre(nq), vim(nq);
    bool has_imag = false;
    for (size_t j = 0; j < nq; ++j) {
        const double theta = kPi * (2.0 * j + 1.0) / (2.0 * static_cast<double>(nq));
        const cplx val = f(std::cos(theta));
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw std::runtime_error("chebyshev_fit: non-finite target value at node");
        vre[j] = val.real();
        vim[j] = val.imag();
        has_imag = has_imag || val.imag() != 0.0;
    }

    const auto cre = dct2(vre, d);
    std::vector<double> cim(d + 1, 0.0);
    if (has_imag) cim = dct2(vim, d);

    ChebyshevApprox out;
    out.degree = d;
    out.target = target_desc;
    out.coeffs.resize(d + 1);
    for (int k = 0; k <= d; ++k) {
        const double scale = (k == 0 ? 1.0 : 2.0) / static_cast<double>(nq);
        out.coeffs[k] = cplx(cre[k] * scale, cim[k] * scale);
    }

    if (ellipse) {
        if (ellipse->r <= 1.0)
            throw std::invalid_argument("chebyshev_fit: ellipse parameter r must be > 1");
        out.certified_bound =
            bernstein_bound(ellipse->r, ellipse->modulus_bound, d) + clenshaw_roundoff(out.coeffs);
        out.bound_provenance = "analytic+fp";
    } else {
        out.certified_bound = measured_sup_error(out, f);
        out.bound_provenance = "measured";
    }
    return out;
}

double fermi_dirac_bound(double c, int d) {
    if (d < 1) throw std::invalid_argument("fermi_dirac_bound: degree must be >= 1");
    const double cp = c / kPi;
    if (c >= 2.0 * kPi) return 12.0 / d * cp * cp * cp * cp;
    return 40.0 / d * cp * cp;
}

int fermi_degree_for(double c, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("fermi_degree_for: eps must be > 0");
    if (c <= 0.0) return 1;
    const double cp = c / kPi;
    const double numer = (c >= 2.0 * kPi) ? 12.0 * cp * cp * cp * cp : 40.0 * cp * cp;
    const double d = std::ceil(numer / eps);
    if (d > 5e7)
        throw std::runtime_error("fermi_degree_for: required degree " + std::to_string(d) +
                                 " is impractical at desk scale");
    return std::max(1, static_cast<int>(d));
}

ChebyshevApprox fermi_dirac_approx(double c, int d) {
    if (c < 0.0) throw std::invalid_argument("fermi_dirac_approx: c must be >= 0");
    if (d < 1) throw std::invalid_argument("fermi_dirac_approx: degree must be >= 1");
    auto f = [c](double x) -> cplx { return 0.25 * logistic_neg(c * x); };
    auto out = chebyshev_fit(f, d, "fermi-dirac(c=" + std::to_string(c) + ")/4");
    out.certified_bound = (c > 0.0) ? fermi_dirac_bound(c, d) : clenshaw_roundoff(out.coeffs);
    out.bound_provenance = "formula";
    return out;
}

double greens_fermi_bracket(double beta, double s, int d) {
    // (1/2) |f - f_{d/2}| with the unscaled Fermi factor: twice the
    // quarter-scaled certificate at degree d/2
    const double c = beta * s;
    if (c <= 0.0) return 0.0;
    return 2.0 * fermi_dirac_bound(c, d / 2);
}

double greens_resolvent_bracket(double s, double eta, int d) {
    const double q = s / eta;
    if (2.0 * q >= 1.0) return 128.0 / d * q * q * q * q;
    return 32.0 / d * q * q;
}

int greens_degree_for(double beta, double s, double eta, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("greens_degree_for: eps must be > 0");
    // both brackets scale as 1/d
    const double at2 = greens_fermi_bracket(beta, s, 2) + greens_resolvent_bracket(s, eta, 2);
    int d = static_cast<int>(std::ceil(2.0 * at2 / eps));
    d = std::max(2, d);
    return d % 2 == 0 ? d : d + 1;
}

ChebyshevApprox greens_scalar_approx(double beta, double s, double eta, double omega, int d) {
    if (beta < 0.0 || s <= 0.0) throw std::invalid_argument("greens_scalar_approx: need beta >= 0, s > 0");
    if (eta <= 0.0) throw std::invalid_argument("greens_scalar_approx: eta must be > 0");
    if (d < 2 || d % 2 != 0)
        throw std::invalid_argument("greens_scalar_approx: degree must be even and >= 2");
    if (std::abs(omega) > s + 1.0)
        throw std::invalid_argument("greens_scalar_approx: |omega| must be <= s + 1");

    const double c = beta * s;
    const int dh = d / 2;
    // unscaled Fermi factor at degree d/2
    auto fermi = chebyshev_fit([c](double x) -> cplx { return logistic_neg(c * x); }, dh,
                               "fermi-factor");
    auto g1 = chebyshev_fit(
        [s, eta, omega](double x) { return 1.0 / (cplx(0.0, eta) - (s * x + omega)); }, dh,
        "resolvent+");
    auto g2 = chebyshev_fit(
        [s, eta, omega](double x) { return -1.0 / (cplx(0.0, eta) + (s * x + omega)); }, dh,
        "resolvent-");

    // the composed product has exact degree <= d, so re-fitting is exact
    auto composed = [&](double x) -> cplx {
        const cplx fv = fermi.eval(x);
        return eta / 8.0 * ((1.0 - fv) * g1.eval(x) + fv * g2.eval(x));
    };
    std::ostringstream desc;
    desc << "greens(beta=" << beta << ",s=" << s << ",eta=" << eta << ",omega=" << omega << ")";
    auto out = chebyshev_fit(composed, d, desc.str());
    out.certified_bound = greens_fermi_bracket(beta, s, d) + greens_resolvent_bracket(s, eta, d);
    out.bound_provenance = "formula";
    return out;
}

cplx TaylorPoly::eval(double x) const {
    cplx acc{0.0, 0.0};
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

TaylorPoly exp_taylor(double t, int K) {
    if (K < 0) throw std::invalid_argument("exp_taylor: order must be >= 0");
    TaylorPoly p;
    p.t = t;
    p.order = K;
    p.coeffs.resize(K + 1);
    cplx c{1.0, 0.0};
    const cplx it{0.0, t};
    for (int k = 0; k <= K; ++k) {
        p.coeffs[k] = c;
        c *= it / static_cast<double>(k + 1);
    }
    const double at = std::abs(t);
    if (at == 0.0) {
        p.instantiated_bound = 0.0;
        p.tail_bound = 0.0;
        return p;
    }
    p.instantiated_bound =
        K > 0 ? std::pow(at / std::sqrt(static_cast<double>(K)), K + 1)
              : std::numeric_limits<double>::infinity();
    // sum_{k>K} t^k/k! <= t^{K+1}/(K+1)! * 1/(1 - t/(K+2)) when t < K+2
    double log_head = (K + 1) * std::log(at) - std::lgamma(static_cast<double>(K + 2));
    if (at < K + 2) {
        p.tail_bound = std::exp(log_head) / (1.0 - at / (K + 2));
    } else {
        p.tail_bound = std::exp(at);  // crude but valid
    }
    return p;
}

ChebyshevApprox log_fermi_approx(double beta, double s, int d) {
    if (beta <= 0.0 || s <= 0.0)
        throw std::invalid_argument("log_fermi_approx: beta and s must be > 0");
    const double c = beta * s;
    auto target = [c](double x) -> cplx {
        const double u = -c * x;
        // log(1 + e^u), stable for both signs
        return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    };
    BernsteinEllipse ellipse;
    const double pc = kPi / c;
    ellipse.r = std::sqrt(pc * pc + 1.0);
    const double u = 1.5 * c;
    ellipse.modulus_bound = u + std::log1p(std::exp(-u));  // log(1 + e^{1.5 c})
    std::ostringstream desc;
    desc << "log-fermi(beta*s=" << c << ")";
    return chebyshev_fit(target, d, desc.str(), ellipse);
}

cplx eval_poly(const ChebyshevApprox& approx, double x) {
    if (std::abs(x) > 1.0 + 1e-9)
        std::fprintf(stderr, "eval_poly: x = %g outside [-1, 1]; Chebyshev values grow fast\n", x);
    return approx.eval(x);
}

double measured_sup_error(const ChebyshevApprox& approx, const std::function<cplx(double)>& f,
                          int npoints) {
    double worst = 0.0;
    for (int i = 0; i < npoints; ++i) {
        const double x = -1.0 + 2.0 * i / (npoints - 1.0);
        worst = std::max(worst, std::abs(approx.eval(x) - f(x)));
    }
    return worst;
}

}  // namespace fermiblock
