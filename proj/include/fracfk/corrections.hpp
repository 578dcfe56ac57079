#pragma once

// Boundary-corrected tempered Riesz operator for nonhomogeneous Dirichlet data.
//
// Each one-sided first term e^{-lambda x} D^alpha [e^{lambda x} G] is discretised
// on G minus its boundary Taylor-exponential interpolant
//   sum_{q<=m2} (x-a)^q e^{-lambda (x-a)} / q! * C_q,   C_q ~ (d/dx + lambda)^q G(a),
// and the exact derivative of the interpolant is added back. With C_q taken
// from one-sided stencils, every correction is linear in the first q+nu nodal
// values, so the operator stays "Toeplitz core + boundary column blocks".

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/coeffs.hpp"
#include "fracfk/error.hpp"
#include "fracfk/onesided.hpp"
#include "fracfk/space_operator.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

/// Parameters of the corrected operator.
struct CorrectionParams {
    double alpha = 1.5;
    double lambda = 0.0;
    double h = 0.0;
    ShiftTriple triple;
    int nu = 2;
    int m2 = 1;
};

namespace detail {

inline void validate_correction(const CorrectionParams& p, std::size_t M) {
    if (p.nu < 1 || p.nu > 4) throw ConfigError("nu", "supported orders are 1..4");
    if (p.m2 < 0 || p.m2 > 2) throw ConfigError("m2", "boundary corrections are tabulated for m2 <= 2");
    if (p.m2 < p.nu - 1) throw ConfigError("m2", "must be at least nu - 1");
    const std::size_t width = p.m2 == 0 ? 1 : static_cast<std::size_t>(p.m2 + p.nu);
    if (M < 2 || width > M) throw ConfigError("M", "grid too coarse for the boundary stencils");
}

/// Real stencils b^{q, lambda h}, q = 0..m2.
inline std::vector<std::vector<double>> space_stencils(const CorrectionParams& p) {
    std::vector<std::vector<double>> out;
    for (int q = 0; q <= p.m2; ++q) {
        const OneSidedStencil st = onesided_coeffs(q, p.nu, {p.lambda * p.h, 0.0}, StencilSide::Left);
        std::vector<double> c;
        for (const auto& z : st.coeffs) c.push_back(z.real());
        out.push_back(std::move(c));
    }
    return out;
}

/// Correction weight of stencil q for a row at distance r (in cells) from the
/// boundary: e^{-lambda r h} [ r^{q-alpha}/Gamma(q+1-alpha) - sum_{k<=r+1} l_k (r+1-k)^q / q! ].
inline double correction_scale(const std::vector<double>& l, double alpha, double lambda, double h,
                               std::size_t r, int q) {
    const double rd = static_cast<double>(r);
    double s = 0.0;
    for (std::size_t k = 0; k <= r + 1; ++k) s += l[k] * std::pow(static_cast<double>(r + 1 - k), q);
    s /= std::tgamma(q + 1.0);
    const double analytic = std::pow(rd, q - alpha) / std::tgamma(q + 1.0 - alpha);
    return std::exp(-lambda * rd * h) * (analytic - s);
}

}  // namespace detail

/// Row i (1..M-1) of the corrected left first-term operator in units of
/// h^{-alpha}: coefficients of G(x_0..x_M). No tempering diagonal subtraction.
inline std::vector<double> left_corrected_weights(std::size_t i, std::size_t M, const CorrectionParams& p) {
    detail::validate_correction(p, M);
    const TemperedWeightSeq w = tempered_weights(p.alpha, p.lambda, p.h, p.triple, M + 1);
    const double lh = p.lambda * p.h;
    std::vector<double> row(M + 1, 0.0);
    for (std::size_t j = 0; j <= i + 1 && j <= M; ++j) {
        const double d = static_cast<double>(i) - static_cast<double>(j);
        row[j] = std::exp(-d * lh) * w.base[i - j + 1];
    }
    const auto st = detail::space_stencils(p);
    for (int q = 0; q <= p.m2; ++q) {
        const double c = detail::correction_scale(w.base, p.alpha, p.lambda, p.h, i, q);
        for (std::size_t pp = 0; pp < st[static_cast<std::size_t>(q)].size(); ++pp)
            row[pp] += st[static_cast<std::size_t>(q)][pp] * c;
    }
    return row;
}

/// Mirror image of left_corrected_weights about the midpoint.
inline std::vector<double> right_corrected_weights(std::size_t i, std::size_t M, const CorrectionParams& p) {
    detail::validate_correction(p, M);
    std::vector<double> mirrored = left_corrected_weights(M - i, M, p);
    return {mirrored.rbegin(), mirrored.rend()};
}

/// (M-1) x (M-1) corrected operator over interior unknowns (h^alpha units):
/// symmetric Toeplitz core (the homogeneous-path H) plus dense correction
/// blocks on the first and last `width` columns of the extended grid.
class CorrectedMatrix {
public:
    CorrectedMatrix() = default;

    std::size_t M() const noexcept { return M_; }
    std::size_t size() const noexcept { return M_ - 1; }
    std::size_t width() const noexcept { return width_; }
    const ToeplitzCore& core() const noexcept { return core_; }
    const CorrectionParams& params() const noexcept { return params_; }

    /// Entry of the extended (M-1) x (M+1) matrix; row i in 1..M-1, column j in 0..M.
    double extended(std::size_t i, std::size_t j) const {
        double v = base_offset(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
        const auto r = static_cast<Eigen::Index>(i - 1);
        if (j < width_) v += left_(r, static_cast<Eigen::Index>(j));
        if (M_ - j < width_) v += right_(r, static_cast<Eigen::Index>(M_ - j));
        return v;
    }
    double operator()(std::size_t r, std::size_t c) const { return extended(r + 1, c + 1); }
    double left_boundary_coeff(std::size_t i) const { return extended(i, 0); }
    double right_boundary_coeff(std::size_t i) const { return extended(i, M_); }

    Eigen::MatrixXd extended_dense() const {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(M_ - 1), static_cast<Eigen::Index>(M_ + 1));
        for (std::size_t i = 1; i < M_; ++i)
            for (std::size_t j = 0; j <= M_; ++j)
                m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) = extended(i, j);
        return m;
    }
    Eigen::MatrixXd dense() const {
        return extended_dense().block(0, 1, static_cast<Eigen::Index>(M_ - 1), static_cast<Eigen::Index>(M_ - 1));
    }

    /// y = L x over interior unknowns: FFT core plus O(width M) block work.
    void matvec(std::span<const cplx> x, std::span<cplx> y) const {
        const std::size_t n = size();
        if (x.size() != n || y.size() != n) throw ConfigError("x", "length must equal matrix size");
        core_.matvec(x, y);
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{};
            // interior columns 1..width-1 (node j <-> unknown j-1)
            for (std::size_t j = 1; j < width_ && j <= n; ++j)
                acc += left_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) * x[j - 1];
            for (std::size_t c = 1; c < width_ && c <= n; ++c)
                acc += right_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[M_ - c - 1];
            y[r] += acc;
        }
    }
    CVector matvec(std::span<const cplx> x) const {
        CVector y(size());
        matvec(x, y);
        return y;
    }

private:
    friend CorrectedMatrix assemble_corrected_matrix(std::size_t, const CorrectionParams&);

    double base_offset(std::ptrdiff_t d) const {
        const auto ad = static_cast<std::size_t>(d < 0 ? -d : d);
        if (ad == 0) return 2.0 * phi_[1];
        if (ad == 1) return phi_[0] + phi_[2];
        return phi_[ad + 1];
    }

    std::size_t M_ = 0;
    std::size_t width_ = 0;
    CorrectionParams params_;
    std::vector<double> phi_;
    ToeplitzCore core_;
    Eigen::MatrixXd left_;   ///< (M-1) x width, column p <-> node p
    Eigen::MatrixXd right_;  ///< (M-1) x width, column p <-> node M-p
};

inline CorrectedMatrix assemble_corrected_matrix(std::size_t M, const CorrectionParams& p) {
    detail::validate_correction(p, M);
    CorrectedMatrix cm;
    cm.M_ = M;
    cm.params_ = p;
    cm.width_ = p.m2 == 0 ? 1 : static_cast<std::size_t>(p.m2 + p.nu);
    const TemperedWeightSeq w = tempered_weights(p.alpha, p.lambda, p.h, p.triple, M + 1);
    cm.phi_ = riesz_phi(w);
    const std::size_t n = M - 1;
    std::vector<double> col(n);
    for (std::size_t d = 0; d < n; ++d) col[d] = cm.base_offset(static_cast<std::ptrdiff_t>(d));
    cm.core_ = ToeplitzCore(col, col);

    const auto st = detail::space_stencils(p);
    const auto rows = static_cast<Eigen::Index>(n);
    const auto wd = static_cast<Eigen::Index>(cm.width_);
    cm.left_ = Eigen::MatrixXd::Zero(rows, wd);
    cm.right_ = Eigen::MatrixXd::Zero(rows, wd);
    // scale(r, q) depends only on the distance to the boundary, so both sides share it.
    std::vector<std::vector<double>> scale(static_cast<std::size_t>(p.m2 + 1), std::vector<double>(M));
    for (int q = 0; q <= p.m2; ++q)
        for (std::size_t r = 1; r < M; ++r)
            scale[static_cast<std::size_t>(q)][r] = detail::correction_scale(w.base, p.alpha, p.lambda, p.h, r, q);
    for (std::size_t i = 1; i < M; ++i) {
        for (int q = 0; q <= p.m2; ++q) {
            const auto& s = st[static_cast<std::size_t>(q)];
            const double cl = scale[static_cast<std::size_t>(q)][i];
            const double cr = scale[static_cast<std::size_t>(q)][M - i];
            for (std::size_t pp = 0; pp < s.size(); ++pp) {
                cm.left_(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(pp)) += s[pp] * cl;
                cm.right_(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(pp)) += s[pp] * cr;
            }
        }
    }
    return cm;
}

}  // namespace fracfk
