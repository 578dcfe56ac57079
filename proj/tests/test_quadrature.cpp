#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "fracfk/quadrature.hpp"
#include "oracle.hpp"

using namespace fracfk;

namespace {

double beta_fn(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }

// int_{-1}^{1} (1-z)^a (1+z)^b ((1+z)/2)^k dz = 2^{a+b+1} B(b+k+1, a+1).
double weighted_moment(double a, double b, int k) { return std::pow(2.0, a + b + 1.0) * beta_fn(b + k + 1.0, a + 1.0); }

double sin_product_dd(double s) {
    const oracle::Jet S = oracle::var(s);
    return (oracle::sin(S * S) * oracle::sin((1.0 - S) * (1.0 - S))).dd.real();
}

}  // namespace

TEST(JacobiGL, WeightSums) {
    EXPECT_EQ(jacobi_gl(0.0, 0.0, 10).weights.size(), 10u);
    double s = 0.0;
    for (double w : jacobi_gl(0.0, 0.0, 10).weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-13);
    s = 0.0;
    for (double w : jacobi_gl(-0.5, 0.0, 12).weights) s += w;
    EXPECT_NEAR(s, 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(JacobiGL, NodesAndPositiveWeights) {
    const JacobiGLRule r = jacobi_gl(-0.7, 0.0, 20);
    EXPECT_EQ(r.nodes.front(), -1.0);
    EXPECT_EQ(r.nodes.back(), 1.0);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    for (double w : r.weights) EXPECT_GT(w, 0.0);
}

TEST(JacobiGL, ExactForLowDegreeMonomials) {
    for (double a : {0.0, -0.3, -0.9})
        for (double b : {0.0, -0.5}) {
            const std::size_t n = 8;
            const JacobiGLRule r = jacobi_gl(a, b, n);
            for (int k = 0; k <= static_cast<int>(2 * n - 3); ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow((1.0 + r.nodes[i]) / 2.0, k);
                EXPECT_NEAR(s / weighted_moment(a, b, k), 1.0, 1e-12) << a << " " << b << " " << k;
            }
        }
}

TEST(FractionalDerivative, Monomials) {
    for (double alpha : {1.1, 1.5, 1.9})
        for (int k = 2; k <= 4; ++k) {
            const double x = 0.7;
            auto g_xx = [k](double s) { return k * (k - 1.0) * std::pow(s, k - 2); };
            const double exact = std::tgamma(k + 1.0) / std::tgamma(k + 1.0 - alpha) * std::pow(x, k - alpha);
            EXPECT_NEAR(left_rl_derivative(g_xx, alpha, 0.0, x) / exact, 1.0, 1e-10) << alpha << " " << k;
        }
}

TEST(FractionalDerivative, MirrorIdentity) {
    const double alpha = 1.35, x = 0.3;
    const double l = left_rl_derivative(sin_product_dd, alpha, 0.0, x);
    const double r = right_rl_derivative([](double s) { return sin_product_dd(1.0 - s); }, alpha, 1.0, 1.0 - x);
    EXPECT_NEAR(l, r, 1e-12 * std::abs(l));
    EXPECT_THROW(left_rl_derivative(sin_product_dd, alpha, 0.5, 0.5), ConfigError);
    EXPECT_THROW(right_rl_derivative(sin_product_dd, 2.0, 1.0, 0.5), ConfigError);
}

TEST(FractionalDerivative, MatchesSubstitutedSimpson) {
    const double alpha = 1.3, x = 0.5;
    const double q = left_rl_derivative(sin_product_dd, alpha, 0.0, x);
    EXPECT_NEAR(q, oracle::left_rl_simpson(sin_product_dd, alpha, x), 1e-8);
    const double qr = right_rl_derivative(sin_product_dd, alpha, 1.0, x);
    EXPECT_NEAR(qr, oracle::right_rl_simpson(sin_product_dd, alpha, x), 1e-8);
}

TEST(ExpPolySeries, AgreesWithQuadrature) {
    const double alpha = 1.6, d = 0.8;
    for (double lam : {0.2, 1.0, 5.0}) {
        auto g_xx = [lam](double s) { return std::exp(lam * s) * (2.0 + 4.0 * lam * s + lam * lam * s * s); };
        const double q = left_rl_derivative(g_xx, alpha, 0.0, d, 40);
        const double s = series_exp_poly_deriv<double>(2, lam, alpha, d);
        EXPECT_NEAR(s / q, 1.0, 1e-8) << lam;
    }
}

TEST(ExpPolySeries, ComplexRateAgreesWithQuadrature) {
    const double alpha = 1.4, d = 0.6;
    const std::complex<double> c{0.3, 2.0};
    auto g_xx = [c](double s) { return std::exp(c * s) * (2.0 + 4.0 * c * s + c * c * s * s); };
    const auto q = left_rl_derivative(g_xx, alpha, 0.0, d, 40);
    const auto s = series_exp_poly_deriv<std::complex<double>>(2, c, alpha, d);
    EXPECT_LT(std::abs(s - q), 1e-9 * std::abs(q));
}

TEST(ExpPolySeries, UntemperedIsSingleTerm) {
    for (int m = 0; m <= 3; ++m) {
        const double ref = std::tgamma(m + 1.0) / std::tgamma(m + 1.0 - 1.5) * std::pow(0.4, m - 1.5);
        EXPECT_NEAR(series_exp_poly_deriv<double>(m, 0.0, 1.5, 0.4), ref, 1e-13 * std::abs(ref));
    }
    EXPECT_THROW(series_exp_poly_deriv<double>(-1, 0.0, 1.5, 0.4), ConfigError);
    EXPECT_THROW(series_exp_poly_deriv<double>(1, 0.0, 1.5, 0.0), ConfigError);
}

TEST(ExpPolySeries, CoefficientRecurrence) {
    // b_{m,k} = rate^k / k! Gamma(k+m+1) / Gamma(k+m+1-alpha)
    for (std::size_t k = 0; k <= 6; ++k) {
        const double kd = static_cast<double>(k);
        const double ref = std::pow(0.7, kd) / std::tgamma(kd + 1.0) * std::tgamma(kd + 3.0) / std::tgamma(kd + 3.0 - 1.2);
        EXPECT_NEAR(series_coefficient(2, 0.7, 1.2, k), ref, 1e-13 * std::abs(ref));
    }
}
