#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermiblock/chebyshev.hpp"
#include "fermiblock/rng.hpp"

using namespace fermiblock;

namespace {

cplx quarter_fermi(double c, double x) { return 0.25 * logistic_neg(c * x); }

cplx greens_target(double beta, double s, double eta, double omega, double x) {
    const double f = logistic_neg(beta * s * x);
    const cplx g1 = 1.0 / (cplx(0.0, eta) - (s * x + omega));
    const cplx g2 = -1.0 / (cplx(0.0, eta) + (s * x + omega));
    return eta / 8.0 * ((1.0 - f) * g1 + f * g2);
}

}  // namespace

TEST_CASE("identity fit: f(x) = x") {
    auto a = chebyshev_fit([](double x) -> cplx { return x; }, 1, "x");
    CHECK(std::abs(a.coeffs[1] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a.coeffs[0]) < 1e-15);
}

TEST_CASE("cos fit converges to machine precision") {
    auto a = chebyshev_fit([](double x) -> cplx { return std::cos(x); }, 20, "cos");
    CHECK(measured_sup_error(a, [](double x) -> cplx { return std::cos(x); }) < 1e-15);
}

TEST_CASE("quadrature recovers exact Chebyshev coefficients on both DCT paths") {
    auto target = [](double x) -> cplx {
        const double t3 = 4 * x * x * x - 3 * x;
        const double t7 = std::cos(7 * std::acos(std::clamp(x, -1.0, 1.0)));
        return 0.5 * t3 - 0.25 * t7 + 0.125;
    };
    for (int d : {7, 300}) {  // direct summation vs FFT-based path
        auto a = chebyshev_fit(target, d, "poly");
        CHECK(std::abs(a.coeffs[0] - cplx(0.125, 0.0)) < 1e-13);
        CHECK(std::abs(a.coeffs[3] - cplx(0.5, 0.0)) < 1e-13);
        CHECK(std::abs(a.coeffs[7] - cplx(-0.25, 0.0)) < 1e-13);
        CHECK(std::abs(a.coeffs[1]) < 1e-13);
        if (d > 7) CHECK(std::abs(a.coeffs[100]) < 1e-13);
    }
}

TEST_CASE("non-finite targets are rejected") {
    CHECK_THROWS_AS(
        chebyshev_fit([](double x) -> cplx { return std::sqrt(x); }, 8, "sqrt"),
        std::runtime_error);
}

TEST_CASE("fermi-dirac approximation: certificates and limits") {
    // constant limit: c -> 0+ gives f = 1/8
    auto flat = fermi_dirac_approx(1e-9, 8);
    CHECK(std::abs(flat.coeffs[0] - cplx(0.125, 0.0)) < 1e-9);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(flat.coeffs[k]) < 1e-9);

    // midpoint value is exact for any c
    CHECK(quarter_fermi(17.3, 0.0) == cplx(0.125, 0.0));

    // certificate value from the explicit quartic branch
    auto a = fermi_dirac_approx(8.0, 2000);
    const double expected = 12.0 / 2000.0 * std::pow(8.0 / kPi, 4);
    CHECK(a.certified_bound == doctest::Approx(expected));
    CHECK(a.certified_bound == doctest::Approx(0.2527).epsilon(2e-3));
    CHECK(measured_sup_error(a, [](double x) { return quarter_fermi(8.0, x); }) <=
          a.certified_bound);

    // branch split at c = 2 pi
    CHECK(fermi_dirac_bound(1.0, 100) == doctest::Approx(40.0 / 100.0 / (kPi * kPi)));
    CHECK(fermi_degree_for(8.0, fermi_dirac_bound(8.0, 500)) <= 501);
}

TEST_CASE("fermi-dirac: measured error within certificate across (c, d)") {
    for (double c : {1.0, 4.0, 8.0}) {
        for (int d : {100, 1000}) {
            auto a = fermi_dirac_approx(c, d);
            const double measured =
                measured_sup_error(a, [c](double x) { return quarter_fermi(c, x); });
            CHECK(measured <= a.certified_bound);
        }
    }
}

TEST_CASE("greens scalar: certificate formulas") {
    // resolvent bracket, quadratic branch (2s/eta < 1)
    CHECK(greens_resolvent_bracket(1.0, 4.0, 1000) == doctest::Approx(0.002));
    // quartic branch
    CHECK(greens_resolvent_bracket(2.0, 0.5, 4000) ==
          doctest::Approx(128.0 / 4000.0 * 256.0));

    // doubling eta within a branch shrinks the bracket by 16x / 4x
    CHECK(greens_resolvent_bracket(2.0, 0.5, 1000) /
              greens_resolvent_bracket(2.0, 1.0, 1000) ==
          doctest::Approx(16.0));
    CHECK(greens_resolvent_bracket(1.0, 8.0, 1000) /
              greens_resolvent_bracket(1.0, 16.0, 1000) ==
          doctest::Approx(4.0));

    CHECK_THROWS_AS(greens_scalar_approx(2.0, 2.0, 0.5, 0.0, 999), std::invalid_argument);
    CHECK_THROWS_AS(greens_scalar_approx(2.0, 2.0, -0.5, 0.0, 1000), std::invalid_argument);
    CHECK_THROWS_AS(greens_scalar_approx(2.0, 2.0, 0.5, 9.0, 1000), std::invalid_argument);

    // degree inversion: even, sufficient, near-minimal
    const int d_inv = greens_degree_for(2.0, 2.0, 0.5, 0.5);
    CHECK(d_inv % 2 == 0);
    CHECK(greens_fermi_bracket(2.0, 2.0, d_inv) + greens_resolvent_bracket(2.0, 0.5, d_inv) <=
          0.5);
}

TEST_CASE("greens scalar: accuracy, boundedness, beta -> 0 limit") {
    const double s = 2.0;
    for (double beta : {0.0, 2.0}) {
        for (double eta : {0.5, 1.0}) {
            for (double omega : {-1.0, 0.0, 1.0}) {
                auto a = greens_scalar_approx(beta, s, eta, omega, 1200);
                auto target = [&](double x) { return greens_target(beta, s, eta, omega, x); };
                CHECK(measured_sup_error(a, target) <= a.certified_bound);
                // the eta/8 prefactor keeps the target within 1/2
                double worst = 0.0;
                for (int g = 0; g <= 2000; ++g) {
                    const double x = -1.0 + g / 1000.0;
                    worst = std::max(worst, std::abs(a.eval(x)));
                }
                CHECK(worst <= 0.5 + 1e-12);
            }
        }
    }
    // beta = 0: Fermi factor is exactly 1/2
    auto a0 = greens_scalar_approx(0.0, 2.0, 1.0, 0.0, 600);
    auto half_half = [](double x) -> cplx {
        const cplx g1 = 1.0 / (cplx(0.0, 1.0) - 2.0 * x);
        const cplx g2 = -1.0 / (cplx(0.0, 1.0) + 2.0 * x);
        return 1.0 / 16.0 * (g1 + g2);
    };
    CHECK(measured_sup_error(a0, half_half) <= a0.certified_bound);
}

TEST_CASE("exp taylor: coefficients, limits, certificates") {
    auto p0 = exp_taylor(0.0, 5);
    for (int x10 = -10; x10 <= 10; ++x10)
        CHECK(p0.eval(x10 / 10.0) == cplx(1.0, 0.0));

    // t=1, K=20: series tail is below 1e-18 analytically; the double-precision
    // grid measurement floors near machine epsilon
    auto p = exp_taylor(1.0, 20);
    CHECK(p.tail_bound < 1e-18);
    double worst = 0.0;
    for (int g = 0; g <= 2000; ++g) {
        const double x = -1.0 + g / 1000.0;
        worst = std::max(worst, std::abs(p.eval(x) - std::exp(cplx(0.0, x))));
    }
    CHECK(worst < 5e-15);
    CHECK(p.tail_bound <= p.instantiated_bound);

    // error strictly decreases with order at fixed t
    auto err_at = [](double t, int order) {
        auto q = exp_taylor(t, order);
        double w = 0.0;
        for (int g = 0; g <= 400; ++g) {
            const double x = -1.0 + g / 200.0;
            w = std::max(w, std::abs(q.eval(x) - std::exp(cplx(0.0, t * x))));
        }
        return w;
    };
    CHECK(err_at(5.0, 40) < err_at(5.0, 10));

    // instantiated bound holds on the grid wherever it is measurable
    struct Pair { double t; int order; };
    for (auto [t, order] : {Pair{1.0, 8}, Pair{2.0, 10}, Pair{3.0, 12}, Pair{5.0, 30}}) {
        auto q = exp_taylor(t, order);
        CHECK(err_at(t, order) <= q.instantiated_bound);
        CHECK(q.tail_bound <= q.instantiated_bound);  // the analytic route agrees
    }
}

TEST_CASE("log fermi approximation") {
    // small beta*s: constant log 2
    auto small = log_fermi_approx(0.01, 1.0, 16);
    CHECK(std::abs(small.coeffs[0] - cplx(std::log(2.0), 0.0)) < 1e-2);

    // x = +1 at large beta*s: target nearly zero
    const double c = 12.0;
    const double at_one = std::log1p(std::exp(-c));
    CHECK(at_one < 1e-5);

    auto a = log_fermi_approx(2.0, 2.0, 500);  // beta*s = 4
    auto target = [](double x) -> cplx {
        const double u = -4.0 * x;
        return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    };
    CHECK(measured_sup_error(a, target) <= a.certified_bound);
    CHECK_THROWS_AS(log_fermi_approx(0.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("bernstein certificate decreases strictly in degree") {
    BernsteinEllipse e{1.5, 1.0};
    auto f = [](double x) -> cplx { return 1.0 / (2.0 - x); };
    double prev = 1e300;
    for (int d = 5; d <= 45; d += 10) {
        auto a = chebyshev_fit(f, d, "resolvent", e);
        CHECK(a.certified_bound < prev);
        CHECK(measured_sup_error(a, f) <= a.certified_bound);
        prev = a.certified_bound;
    }
}

TEST_CASE("clenshaw evaluation against the trigonometric formula") {
    ChebyshevApprox lin;
    lin.coeffs = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    lin.degree = 1;
    CHECK(eval_poly(lin, 0.3) == cplx(0.3, 0.0));

    ChebyshevApprox t2;
    t2.coeffs = {cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
    t2.degree = 2;
    CHECK(std::abs(eval_poly(t2, 0.5) - cplx(-0.5, 0.0)) < 1e-15);

    CounterRng rng(99);
    ChebyshevApprox rand30;
    rand30.degree = 30;
    for (int k = 0; k <= 30; ++k)
        rand30.coeffs.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    for (int g = 0; g < 100; ++g) {
        const double x = rng.uniform(-1.0, 1.0);
        cplx naive{0.0, 0.0};
        for (int k = 0; k <= 30; ++k) naive += rand30.coeffs[k] * std::cos(k * std::acos(x));
        CHECK(std::abs(rand30.eval(x) - naive) < 1e-12);
    }
}

TEST_CASE("serialization round trip") {
    auto a = fermi_dirac_approx(4.0, 60);
    const auto text = a.to_text();
    const auto b = ChebyshevApprox::from_text(text);
    CHECK(b.degree == a.degree);
    CHECK(b.certified_bound == a.certified_bound);
    CHECK(b.target == a.target);
    REQUIRE(b.coeffs.size() == a.coeffs.size());
    for (size_t k = 0; k < a.coeffs.size(); ++k) CHECK(b.coeffs[k] == a.coeffs[k]);
}
