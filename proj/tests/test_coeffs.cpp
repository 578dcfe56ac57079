#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fracfk/coeffs.hpp"
#include "fracfk/error.hpp"

using namespace fracfk;

namespace {

// (-1)^j binom(order, j) through the Gamma function.
double binom_weight(double order, int j) {
    double v = std::tgamma(order + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(order - j + 1.0));
    return j % 2 == 0 ? v : -v;
}

double series_at(const std::vector<double>& c, double z) {
    double s = 0.0, zp = 1.0;
    for (double v : c) {
        s += v * zp;
        zp *= z;
    }
    return s;
}

}  // namespace

TEST(Grunwald, MatchesGammaFunctionBinomials) {
    for (double a : {0.3, 1.3, 1.5, 1.8}) {
        const GrunwaldSeq g = grunwald_weights(a, 20);
        for (int j = 0; j <= 20; ++j) EXPECT_NEAR(g[static_cast<std::size_t>(j)], binom_weight(a, j), 1e-12) << a << " " << j;
    }
}

TEST(Grunwald, GeneratingFunction) {
    const GrunwaldSeq g = grunwald_weights(1.5, 400);
    EXPECT_NEAR(series_at(g.values, 0.5), std::pow(0.5, 1.5), 1e-13);
}

TEST(Grunwald, SignsForOrderBelowOne) {
    const GrunwaldSeq g = grunwald_weights(0.7, 200);
    EXPECT_EQ(g[0], 1.0);
    for (std::size_t k = 1; k < g.size(); ++k) EXPECT_LT(g[k], 0.0);
}

TEST(R3Interval, ZeroFeasibleAtOnePointThree) {
    EXPECT_TRUE(r3_interval(1.3).contains(0.0));
    EXPECT_NO_THROW(shift_triple(1.3, 0.0));
}

TEST(R3Interval, HalfUpperBoundIsFeasible) {
    for (double a : {1.3, 1.8}) {
        const double r3 = (a - 1.0) * (2.0 - a) * (a + 3.0) / (4.0 * (a + 1.0) * (a + 2.0));
        const ShiftTriple t = shift_triple(a, r3);
        EXPECT_NEAR(t.r1 + t.r2 + t.r3, 1.0, 1e-15);
        EXPECT_NEAR(r3, r3_interval(a).hi / 2.0, 1e-15);
    }
}

TEST(R3Interval, TripleIsConsistent) {
    const ShiftTriple t = shift_triple(1.5, 0.01);
    EXPECT_NEAR(t.r1 + t.r2 + t.r3, 1.0, 1e-15);
    // second-order condition: r1 - r3 = alpha / 2
    EXPECT_NEAR(t.r1 - t.r3, 0.75, 1e-15);
}

TEST(R3Interval, InfeasibleRejectedWithBounds) {
    const R3Interval iv = r3_interval(1.5);
    try {
        shift_triple(1.5, iv.hi + 1e-3);
        FAIL() << "no exception";
    } catch (const FeasibilityError& e) {
        EXPECT_EQ(e.parameter(), "r3");
        EXPECT_DOUBLE_EQ(e.lo(), iv.lo);
        EXPECT_DOUBLE_EQ(e.hi(), iv.hi);
    }
    EXPECT_THROW(shift_triple(1.5, iv.lo - 1e-3), FeasibilityError);
    EXPECT_THROW(r3_interval(2.0), ConfigError);
}

TEST(TemperedWeights, UntemperedEqualsBase) {
    const TemperedWeightSeq w = tempered_weights(1.5, 0.0, 0.1, shift_triple(1.5, 0.0), 30);
    EXPECT_EQ(w.tempering, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) EXPECT_EQ(w[j], w.base[j]);
}

TEST(TemperedWeights, SignsOfExample) {
    const TemperedWeightSeq w = tempered_weights(1.5, 0.2, 1.0 / 16.0, shift_triple(1.5, 0.0), 5);
    EXPECT_GT(w[0], 0.0);
    EXPECT_LT(w[1], 0.0);
    EXPECT_GE(w[0] + w[2], 0.0);
    for (std::size_t j = 3; j <= 5; ++j) EXPECT_GT(w[j], 0.0);
}

TEST(TemperedWeights, BaseIsShiftCombination) {
    const double a = 1.7;
    const ShiftTriple t = shift_triple(a, 0.02);
    const TemperedWeightSeq w = tempered_weights(a, 0.4, 0.05, t, 12);
    for (int j = 0; j <= 12; ++j) {
        double ref = t.r1 * binom_weight(a, j);
        if (j >= 1) ref += t.r2 * binom_weight(a, j - 1);
        if (j >= 2) ref += t.r3 * binom_weight(a, j - 2);
        EXPECT_NEAR(w.base[static_cast<std::size_t>(j)], ref, 1e-13);
    }
}

TEST(TemperedWeights, TailIdentity) {
    for (double lh : {0.01, 0.1, 1.0}) {
        const TemperedWeightSeq w = tempered_weights(1.4, lh, 1.0, shift_triple(1.4, 0.0), 10000);
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += std::exp(-(static_cast<double>(j) - 1.0) * lh) * w[j];
        EXPECT_NEAR(s, 0.0, 1e-8) << lh;
    }
}

// Left tempered derivative e^{-lx} D^a (e^{lx} G) - l^a G of G = e^{-lx} x^4,
// whose exact value is e^{-lx} Gamma(5)/Gamma(5-a) x^{4-a} - l^a G.
TEST(TemperedWeights, SecondOrderOnSmoothFunction) {
    const double a = 1.6, lam = 0.8, x = 0.5;
    const double exact = std::exp(-lam * x) * std::tgamma(5.0) / std::tgamma(5.0 - a) * std::pow(x, 4.0 - a) -
                         std::pow(lam, a) * std::exp(-lam * x) * std::pow(x, 4.0);
    std::vector<double> err;
    for (std::size_t M : {32u, 64u, 128u, 256u}) {
        const double h = 1.0 / static_cast<double>(M);
        const TemperedWeightSeq w = tempered_weights(a, lam, h, shift_triple(a, 0.0), M + 2);
        const std::size_t i = M / 2;
        double s = 0.0;
        for (std::size_t k = 0; k <= i + 1; ++k) {
            const double xn = static_cast<double>(i + 1 - k) * h;
            s += std::exp(-(static_cast<double>(k) - 1.0) * lam * h) * w[k] * std::exp(-lam * xn) * std::pow(xn, 4.0);
        }
        err.push_back(std::abs(s / std::pow(h, a) - exact));
    }
    for (std::size_t k = 1; k < err.size(); ++k) EXPECT_NEAR(std::log2(err[k - 1] / err[k]), 2.0, 0.15);
}

TEST(PowerSeries, MatchesBinomialSeries) {
    const std::vector<double> p{1.0, 1.0};
    const std::vector<double> q = power_series_pow(p, 0.5, 12);
    for (int k = 0; k <= 12; ++k) {
        const double ref = std::tgamma(1.5) / (std::tgamma(k + 1.0) * std::tgamma(1.5 - k));
        EXPECT_NEAR(q[static_cast<std::size_t>(k)], ref, 1e-14);
    }
    EXPECT_THROW(power_series_pow(std::vector<double>{0.0, 1.0}, 0.5, 3), ConfigError);
}

TEST(BdfPolynomial, KnownCoefficients) {
    const std::vector<double> p2 = bdf_polynomial(2);
    EXPECT_NEAR(p2[0], 1.5, 1e-15);
    EXPECT_NEAR(p2[1], -2.0, 1e-15);
    EXPECT_NEAR(p2[2], 0.5, 1e-15);
    const std::vector<double> p4 = bdf_polynomial(4);
    const double ref[] = {25.0 / 12.0, -4.0, 3.0, -4.0 / 3.0, 0.25};
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(p4[static_cast<std::size_t>(k)], ref[k], 1e-14);
}

TEST(TimeWeights, FirstOrderEqualsGrunwald) {
    const TimeWeightSeq l = lubich_time_weights(1, 0.4, 50);
    const GrunwaldSeq g = grunwald_weights(0.4, 50);
    for (std::size_t k = 0; k <= 50; ++k) EXPECT_EQ(l[k], g[k]);
}

// (3/2 - 2z + z^2/2)^g = (3/2)^g (1-z)^g (1-z/3)^g: product of two binomial series.
TEST(TimeWeights, SecondOrderFactorisedOracle) {
    const double gam = 0.6;
    const std::size_t n = 40;
    const TimeWeightSeq l = lubich_time_weights(2, gam, n);
    const GrunwaldSeq g = grunwald_weights(gam, n);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j) s += g[j] * g[k - j] * std::pow(1.0 / 3.0, static_cast<double>(k - j));
        EXPECT_NEAR(l[k], std::pow(1.5, gam) * s, 1e-13) << k;
    }
}

TEST(TimeWeights, GeneratingFunctionAllOrders) {
    for (int nu = 1; nu <= 4; ++nu) {
        const TimeWeightSeq l = lubich_time_weights(nu, 0.7, 300);
        const double z = 0.3;
        EXPECT_NEAR(series_at(l.values, z), std::pow(series_at(bdf_polynomial(nu), z), 0.7), 1e-13) << nu;
    }
}

// Convolution quadrature of t^5: tau^{-g} sum l_k f(t_{n-k}) -> Gamma(6)/Gamma(6-g) t^{5-g}.
TEST(TimeWeights, ObservedOrderMatchesNu) {
    const double gam = 0.5;
    for (int nu = 1; nu <= 4; ++nu) {
        std::vector<double> err;
        for (std::size_t N : {40u, 80u, 160u}) {
            const double tau = 1.0 / static_cast<double>(N);
            const TimeWeightSeq l = lubich_time_weights(nu, gam, N);
            double s = 0.0;
            for (std::size_t k = 0; k <= N; ++k) s += l[k] * std::pow(static_cast<double>(N - k) * tau, 5.0);
            err.push_back(std::abs(s / std::pow(tau, gam) - std::tgamma(6.0) / std::tgamma(6.0 - gam)));
        }
        const double rate = std::log2(err[1] / err[2]);
        EXPECT_NEAR(rate, nu, 0.2) << nu;
    }
}

TEST(TimeWeights, RejectsUnsupportedOrder) {
    EXPECT_THROW(lubich_time_weights(5, 0.5, 4), ConfigError);
    EXPECT_THROW(lubich_time_weights(2, 0.0, 4), ConfigError);
}
