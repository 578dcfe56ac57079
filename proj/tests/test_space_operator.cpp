#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fracfk/space_operator.hpp"
#include "fracfk/toeplitz.hpp"

using namespace fracfk;

namespace {

CVector random_vector(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CVector x(n);
    for (auto& z : x) z = {u(rng), u(rng)};
    return x;
}

double max_diff(const CVector& a, const Eigen::VectorXcd& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
    return m;
}

Eigen::VectorXcd as_eigen(const CVector& x) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = x[i];
    return v;
}

}  // namespace

TEST(Toeplitz, FftProductMatchesDense) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1u, 2u, 15u, 129u, 513u}) {
        std::vector<double> col(n), row(n);
        for (auto& v : col) v = u(rng);
        for (auto& v : row) v = u(rng);
        row[0] = col[0];
        const ToeplitzCore T(col, row);
        const CVector x = random_vector(n, static_cast<unsigned>(n));
        const Eigen::MatrixXcd D = T.dense().cast<cplx>();
        EXPECT_LT(max_diff(T.matvec(x), D * as_eigen(x)), 1e-12) << n;
        CVector y(n);
        T.matvec_direct(x, y);
        EXPECT_LT(max_diff(y, D * as_eigen(x)), 1e-12) << n;
    }
}

TEST(Toeplitz, EntriesAndTranspose) {
    const ToeplitzCore T({4.0, 1.0, 2.0}, {4.0, -1.0, -3.0});
    EXPECT_EQ(T(2, 0), 2.0);
    EXPECT_EQ(T(0, 2), -3.0);
    EXPECT_EQ(T.offset(-1), -1.0);
    EXPECT_EQ(T.diagonal(), 4.0);
    EXPECT_TRUE(T.transposed().dense().isApprox(T.dense().transpose()));
}

TEST(Toeplitz, RejectsInconsistentInput) {
    EXPECT_THROW(ToeplitzCore({1.0, 2.0}, {1.5, 0.0}), ConfigError);
    EXPECT_THROW(ToeplitzCore({1.0}, {1.0, 2.0}), ConfigError);
    const ToeplitzCore T({1.0, 2.0}, {1.0, 0.0});
    CVector x(3);
    EXPECT_THROW(T.matvec(x), ConfigError);
}

TEST(RieszOperator, KappaSign) {
    EXPECT_LT(riesz_kappa(1.5), 0.0);
    EXPECT_NEAR(riesz_kappa(1.5), 1.0 / (2.0 * std::cos(0.75 * std::numbers::pi)), 1e-15);
    EXPECT_THROW(riesz_kappa(1.0), ConfigError);
}

TEST(RieszOperator, HIsLeftPlusTranspose) {
    for (double lam : {0.0, 0.7}) {
        const std::size_t M = 20;
        const TemperedWeightSeq w = tempered_weights(1.3, lam, 1.0 / M, shift_triple(1.3, 0.0), M + 1);
        const ToeplitzCore A = assemble_left_matrix(w, M);
        const RieszOperator op = assemble_riesz(w, M, 1.0, 0.1, 0.5);
        const Eigen::MatrixXd H = A.dense() + A.dense().transpose();
        EXPECT_LT((op.core.dense() - H).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(RieszOperator, ExtendedMatchesLeftPlusRight) {
    const std::size_t M = 16;
    const TemperedWeightSeq w = tempered_weights(1.8, 0.2, 1.0 / M, shift_triple(1.8, 0.0), M + 1);
    const RieszOperator op = assemble_riesz(w, M, 1.0, 0.1, 0.5);
    const Eigen::MatrixXd E = left_operator_extended(w, M) + right_operator_extended(w, M);
    EXPECT_LT((op.extended_dense() - E).cwiseAbs().maxCoeff(), 1e-14);
    for (std::size_t i = 1; i < M; ++i) {
        EXPECT_DOUBLE_EQ(op.left_boundary_coeff(i), E(static_cast<Eigen::Index>(i - 1), 0));
        EXPECT_DOUBLE_EQ(op.right_boundary_coeff(i), E(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(M)));
    }
}

TEST(RieszOperator, ScaledKappa) {
    const std::size_t M = 10;
    const double h = 0.1, tau = 0.05;
    const TemperedWeightSeq w = tempered_weights(1.5, 0.0, h, shift_triple(1.5, 0.0), M + 1);
    const RieszOperator op = assemble_riesz(w, M, 2.0, tau, 0.4);
    EXPECT_NEAR(op.kappa_scaled, -2.0 * riesz_kappa(1.5) * std::pow(tau, 0.4) / std::pow(h, 1.5), 1e-12);
    EXPECT_GT(op.kappa_scaled, 0.0);
}

// r1 A_1 + r2 A_0 + r3 A_{-1} of the first-order shifted operators equals the
// second-order left operator, tempering subtraction included.
TEST(RieszOperator, ShiftCombinationIdentity) {
    const std::size_t M = 24;
    const double a = 1.45, lam = 0.9, h = 1.0 / M;
    const ShiftTriple t = shift_triple(a, 0.03);
    const TemperedWeightSeq w = tempered_weights(a, lam, h, t, M + 2);
    const Eigen::MatrixXd combo = t.r1 * shifted_left_operator_extended(a, lam, h, 1, M) +
                                  t.r2 * shifted_left_operator_extended(a, lam, h, 0, M) +
                                  t.r3 * shifted_left_operator_extended(a, lam, h, -1, M);
    EXPECT_LT((combo - left_operator_extended(w, M)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(RieszOperator, NegativeDefinite) {
    for (double a : {1.3, 1.8})
        for (double lam : {0.0, 0.2, 0.7}) {
            const std::size_t M = 32;
            const TemperedWeightSeq w = tempered_weights(a, lam, 1.0 / M, shift_triple(a, 0.0), M + 1);
            const Eigen::MatrixXd H = assemble_riesz(w, M, 1.0, 0.1, 0.5).core.dense();
            EXPECT_LT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().maxCoeff(), 0.0) << a << " " << lam;
        }
}

TEST(RieszOperator, RowSumsOfOnesVector) {
    const std::size_t M = 64;
    const TemperedWeightSeq w = tempered_weights(1.3, 0.2, 1.0 / M, shift_triple(1.3, 0.0), M + 1);
    const RieszOperator op = assemble_riesz(w, M, 1.0, 0.1, 0.5);
    const Eigen::MatrixXd H = op.core.dense();
    const Eigen::VectorXd s = H.rowwise().sum();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        EXPECT_LE(s(i), 0.0);
        EXPECT_GE(s(i), -std::abs(2.0 * op.phi[1]));
    }
}

TEST(RieszOperator, SizeChecks) {
    const TemperedWeightSeq w = tempered_weights(1.5, 0.0, 0.1, shift_triple(1.5, 0.0), 4);
    EXPECT_THROW(assemble_riesz(w, 8, 1.0, 0.1, 0.5), ConfigError);
    EXPECT_THROW(assemble_left_matrix(w, 1), ConfigError);
    EXPECT_THROW(shifted_left_operator_extended(1.5, 0.0, 0.1, 2, 8), ConfigError);
}
