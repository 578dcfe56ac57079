#pragma once

// Tempered Riesz space operator for homogeneous-boundary schemes.
//
// Nodes x_i = a + i h, i = 0..M. Unknowns live on x_1..x_{M-1}; matrices over
// the unknowns are (M-1) x (M-1). "Extended" matrices carry the two Dirichlet
// columns x_0 and x_M as well, giving (M-1) x (M+1).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/coeffs.hpp"
#include "fracfk/error.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

/// kappa_alpha = 1 / (2 cos(alpha pi / 2)); negative on (1, 2).
inline double riesz_kappa(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError("alpha", "must lie in (1, 2)");
    return 1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0));
}

/// Lower-Hessenberg Toeplitz matrix A with A(i, j) = e^{-(i-j) lambda h} omega_{i-j+1}
/// for j <= i + 1 and zero above the first superdiagonal.
inline ToeplitzCore assemble_left_matrix(const TemperedWeightSeq& w, std::size_t M) {
    if (M < 2) throw ConfigError("M", "must be at least 2");
    if (w.size() < M) throw ConfigError("weights", "need at least M coefficients");
    const std::size_t n = M - 1;
    const double lh = w.lambda * w.h;
    std::vector<double> col(n), row(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) col[d] = std::exp(-static_cast<double>(d) * lh) * w[d + 1];
    row[0] = col[0];
    if (n > 1) row[1] = std::exp(lh) * w[0];
    return ToeplitzCore(std::move(col), std::move(row));
}

/// Entries phi_j of H = A + A^T.
inline std::vector<double> riesz_phi(const TemperedWeightSeq& w) {
    const double lh = w.lambda * w.h;
    std::vector<double> phi(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        phi[j] = std::exp(-(static_cast<double>(j) - 1.0) * lh) * w[j];
    }
    return phi;
}

/// Symmetric operator H of the second-order tempered Riesz discretisation,
/// together with the scaling kappa = -K kappa_alpha tau^gamma / h^alpha.
struct RieszOperator {
    ToeplitzCore core;          ///< H over the M-1 interior unknowns
    std::vector<double> phi;    ///< phi_0 .. phi_M
    double kappa_alpha = 0.0;
    double kappa_scaled = 0.0;
    double K = 1.0;
    std::size_t M = 0;

    /// H entry at offset d = i - j, valid for |d| <= M - 1 (covers boundary columns).
    double offset(std::ptrdiff_t d) const {
        const auto ad = static_cast<std::size_t>(d < 0 ? -d : d);
        if (ad == 0) return 2.0 * phi[1];
        if (ad == 1) return phi[0] + phi[2];
        return phi[ad + 1];
    }

    /// Coefficient coupling interior row i (1..M-1) to boundary node x_0.
    double left_boundary_coeff(std::size_t i) const { return offset(static_cast<std::ptrdiff_t>(i)); }
    /// Coefficient coupling interior row i (1..M-1) to boundary node x_M.
    double right_boundary_coeff(std::size_t i) const {
        return offset(static_cast<std::ptrdiff_t>(M - i));
    }

    /// Dense (M-1) x (M+1) operator including the Dirichlet columns.
    Eigen::MatrixXd extended_dense() const {
        const auto n = static_cast<Eigen::Index>(M + 1);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(M - 1), n);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = offset((r + 1) - c);
        return m;
    }
};

inline RieszOperator assemble_riesz(const TemperedWeightSeq& w, std::size_t M, double K,
                                    double tau, double gamma) {
    if (M < 2) throw ConfigError("M", "must be at least 2");
    if (w.size() < M + 1) throw ConfigError("weights", "need at least M+1 coefficients");
    RieszOperator op;
    op.M = M;
    op.K = K;
    op.kappa_alpha = riesz_kappa(w.alpha);
    op.kappa_scaled = -K * op.kappa_alpha * std::pow(tau, gamma) / std::pow(w.h, w.alpha);
    op.phi = riesz_phi(w);
    op.phi.resize(M + 1);
    const std::size_t n = M - 1;
    std::vector<double> col(n);
    for (std::size_t d = 0; d < n; ++d) col[d] = op.offset(static_cast<std::ptrdiff_t>(d));
    op.core = ToeplitzCore(col, col);
    return op;
}

/// Extended (M-1) x (M+1) matrix of the left second-order operator, i.e. the
/// weights e^{-(i-j) lambda h} omega_{i-j+1} for j <= i+1 (unscaled by h^alpha).
inline Eigen::MatrixXd left_operator_extended(const TemperedWeightSeq& w, std::size_t M) {
    if (w.size() < M + 1) throw ConfigError("weights", "need at least M+1 coefficients");
    const double lh = w.lambda * w.h;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M - 1),
                                              static_cast<Eigen::Index>(M + 1));
    for (std::size_t i = 1; i < M; ++i) {
        for (std::size_t j = 0; j <= i + 1; ++j) {
            const auto d = static_cast<double>(i) - static_cast<double>(j);
            m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) =
                std::exp(-d * lh) * w[i - j + 1];
        }
    }
    return m;
}

/// Extended matrix of the right second-order operator: row i couples to
/// x_{i+k-1} with weight e^{-(k-1) lambda h} omega_k.
inline Eigen::MatrixXd right_operator_extended(const TemperedWeightSeq& w, std::size_t M) {
    if (w.size() < M + 1) throw ConfigError("weights", "need at least M+1 coefficients");
    const double lh = w.lambda * w.h;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M - 1),
                                              static_cast<Eigen::Index>(M + 1));
    for (std::size_t i = 1; i < M; ++i) {
        for (std::size_t k = 0; k <= M - i + 1; ++k) {
            m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i + k - 1)) =
                std::exp(-(static_cast<double>(k) - 1.0) * lh) * w[k];
        }
    }
    return m;
}

/// First-order single-shift operator (shift p in {-1, 0, 1}), extended
/// (M-1) x (M+1) and unscaled by h^alpha. Includes the tempering subtraction.
inline Eigen::MatrixXd shifted_left_operator_extended(double alpha, double lambda, double h,
                                                      int p, std::size_t M) {
    if (p < -1 || p > 1) throw ConfigError("p", "shift must be -1, 0 or 1");
    const GrunwaldSeq g = grunwald_weights(alpha, M + 2);
    const double lh = lambda * h;
    const double sub = std::exp(p * lh) * std::pow(-std::expm1(-lh), alpha);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M - 1),
                                              static_cast<Eigen::Index>(M + 1));
    for (std::size_t i = 1; i < M; ++i) {
        const auto ip = static_cast<std::ptrdiff_t>(i) + p;
        for (std::ptrdiff_t j = 0; j <= ip; ++j) {
            const std::ptrdiff_t node = ip - j;
            m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(node)) +=
                std::exp(-static_cast<double>(j - p) * lh) * g[static_cast<std::size_t>(j)];
        }
        m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i)) -= sub;
    }
    return m;
}

}  // namespace fracfk
