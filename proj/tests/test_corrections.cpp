#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fracfk/corrections.hpp"

using namespace fracfk;

namespace {

CorrectionParams params(double alpha, double lambda, std::size_t M, int nu, int m2) {
    CorrectionParams p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.h = 1.0 / static_cast<double>(M);
    p.triple = shift_triple(alpha, 0.0);
    p.nu = nu;
    p.m2 = m2;
    return p;
}

// Second-order weights with r3 = 0 straight from Gamma-function binomials.
double oracle_weight(double a, int j) {
    auto g = [a](int k) {
        if (k < 0) return 0.0;
        const double v = std::tgamma(a + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(a - k + 1.0));
        return k % 2 == 0 ? v : -v;
    };
    return (a / 2.0) * g(j) + (1.0 - a / 2.0) * g(j - 1);
}

}  // namespace

// lambda = 0, nu = 2, m2 = 1: stencils b^0 = {1}, b^1 = {-3/2, 2, -1/2}.
TEST(Corrections, UntemperedRowTranscription) {
    const double a = 1.4;
    const std::size_t M = 12;
    const CorrectionParams p = params(a, 0.0, M, 2, 1);
    const std::vector<std::vector<double>> b{{1.0}, {-1.5, 2.0, -0.5}};
    for (std::size_t i = 1; i < M; ++i) {
        const std::vector<double> row = left_corrected_weights(i, M, p);
        std::vector<double> ref(M + 1, 0.0);
        for (std::size_t j = 0; j <= i + 1; ++j) ref[j] = oracle_weight(a, static_cast<int>(i - j + 1));
        for (int q = 0; q <= 1; ++q) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i + 1; ++k)
                s += oracle_weight(a, static_cast<int>(k)) * std::pow(static_cast<double>(i + 1 - k), q) / std::tgamma(q + 1.0);
            const double c = std::pow(static_cast<double>(i), q - a) / std::tgamma(q + 1.0 - a) - s;
            for (std::size_t j = 0; j < b[static_cast<std::size_t>(q)].size(); ++j) ref[j] += b[static_cast<std::size_t>(q)][j] * c;
        }
        for (std::size_t j = 0; j <= M; ++j) EXPECT_NEAR(row[j], ref[j], 1e-11) << i << " " << j;
    }
}

TEST(Corrections, RightIsMirrorOfLeft) {
    const std::size_t M = 16;
    const CorrectionParams p = params(1.7, 0.3, M, 3, 2);
    for (std::size_t i = 1; i < M; ++i) {
        const auto r = right_corrected_weights(i, M, p);
        const auto l = left_corrected_weights(M - i, M, p);
        for (std::size_t j = 0; j <= M; ++j) EXPECT_EQ(r[j], l[M - j]);
    }
}

// Extended corrected matrix = homogeneous H + (corrected - plain) rows of both one-sided operators.
TEST(Corrections, MatrixAgreesWithRowWeights) {
    const std::size_t M = 20;
    const CorrectionParams p = params(1.6, 0.4, M, 2, 1);
    const CorrectedMatrix cm = assemble_corrected_matrix(M, p);
    const TemperedWeightSeq w = tempered_weights(p.alpha, p.lambda, p.h, p.triple, M + 1);
    const Eigen::MatrixXd H = assemble_riesz(w, M, 1.0, 1.0, 0.5).extended_dense();
    const double lh = p.lambda * p.h;
    for (std::size_t i = 1; i < M; ++i) {
        const auto l = left_corrected_weights(i, M, p);
        const auto r = right_corrected_weights(i, M, p);
        for (std::size_t j = 0; j <= M; ++j) {
            double plain_l = 0.0, plain_r = 0.0;
            if (j <= i + 1) plain_l = std::exp(-(static_cast<double>(i) - static_cast<double>(j)) * lh) * w.base[i - j + 1];
            if (j + 1 >= i) plain_r = std::exp(-(static_cast<double>(j) - static_cast<double>(i)) * lh) * w.base[j + 1 - i];
            const double ref = H(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) + (l[j] - plain_l) + (r[j] - plain_r);
            EXPECT_NEAR(cm.extended(i, j), ref, 1e-11) << i << " " << j;
        }
    }
}

TEST(Corrections, MatvecMatchesDense) {
    const std::size_t M = 129;
    for (int nu = 1; nu <= 3; ++nu) {
        const CorrectedMatrix cm = assemble_corrected_matrix(M, params(1.3, 0.2, M, nu, std::max(1, nu - 1)));
        std::mt19937 rng(static_cast<unsigned>(nu));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        CVector x(cm.size());
        Eigen::VectorXcd xe(static_cast<Eigen::Index>(cm.size()));
        for (std::size_t k = 0; k < x.size(); ++k) xe(static_cast<Eigen::Index>(k)) = x[k] = {u(rng), u(rng)};
        const CVector y = cm.matvec(x);
        const Eigen::VectorXcd ye = cm.dense().cast<cplx>() * xe;
        double worst = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y[k] - ye(static_cast<Eigen::Index>(k))));
        EXPECT_LT(worst, 1e-11) << nu;
    }
}

// G = e^{-lambda x} P(x) with P(0) != 0: e^{-lambda x} D^a [e^{lambda x} G] = e^{-lambda x} D^a P.
TEST(Corrections, RestoresSecondOrderForNonzeroBoundary) {
    const double a = 1.5, lam = 0.5, x = 0.5;
    const double P[] = {1.0, 2.0, 0.0, 1.0};
    double exact = 0.0;
    for (int k = 0; k < 4; ++k) exact += P[k] * std::tgamma(k + 1.0) / std::tgamma(k + 1.0 - a) * std::pow(x, k - a);
    exact *= std::exp(-lam * x);
    std::vector<double> err_c, err_plain;
    for (std::size_t M : {32u, 64u, 128u, 256u}) {
        const CorrectionParams p = params(a, lam, M, 2, 1);
        const std::vector<double> row = left_corrected_weights(M / 2, M, p);
        const TemperedWeightSeq w = tempered_weights(a, lam, p.h, p.triple, M + 1);
        double sc = 0.0, sp = 0.0;
        for (std::size_t j = 0; j <= M; ++j) {
            const double xj = static_cast<double>(j) * p.h;
            const double g = std::exp(-lam * xj) * (P[0] + xj * (P[1] + xj * (P[2] + xj * P[3])));
            sc += row[j] * g;
            if (j <= M / 2 + 1) sp += std::exp(-(static_cast<double>(M / 2) - static_cast<double>(j)) * lam * p.h) * w.base[M / 2 - j + 1] * g;
        }
        err_c.push_back(std::abs(sc / std::pow(p.h, a) - exact));
        err_plain.push_back(std::abs(sp / std::pow(p.h, a) - exact));
    }
    for (std::size_t k = 1; k < err_c.size(); ++k) EXPECT_NEAR(std::log2(err_c[k - 1] / err_c[k]), 2.0, 0.2);
    EXPECT_LT(10.0 * err_c.back(), err_plain.back());
}

TEST(Corrections, ValidatesParameters) {
    EXPECT_THROW(assemble_corrected_matrix(16, params(1.5, 0.0, 16, 5, 4)), ConfigError);
    EXPECT_THROW(assemble_corrected_matrix(16, params(1.5, 0.0, 16, 2, 3)), ConfigError);
    EXPECT_THROW(assemble_corrected_matrix(16, params(1.5, 0.0, 16, 3, 1)), ConfigError);
    EXPECT_THROW(assemble_corrected_matrix(3, params(1.5, 0.0, 3, 4, 2)), ConfigError);
    EXPECT_NO_THROW(assemble_corrected_matrix(16, params(1.5, 0.0, 16, 1, 0)));
}
