#pragma once

// Geometric multigrid V-cycles for real n x n systems with complex right-hand sides.
//
// Transfer pair: full weighting [1 2 1]/4 centred on fine index 2J+1 (0-based)
// and P = 2 R^T. With n_c = floor((n-1)/2) this keeps Galerkin coarse operators
// of Toeplitz matrices exactly Toeplitz for any n.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/error.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

struct MgConfig {
    int pre_smooth = 2;
    int post_smooth = 2;
    double damping = 2.0 / 3.0;
    std::size_t coarsest = 7;
    double tol = 1e-9;
    int max_cycles = 50;
    int stagnation_window = 5;
    double stagnation_factor = 10.0;
    std::size_t max_dense_fallback = 8192;
};

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
    double seconds = 0.0;
    bool fallback = false;
    std::string note;
};

namespace detail {

inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

using ConstCMap = Eigen::Map<const Eigen::VectorXcd>;
using CMap = Eigen::Map<Eigen::VectorXcd>;

inline void dense_matvec(const Eigen::MatrixXd& A, std::span<const cplx> x, std::span<cplx> y) {
    const auto n = static_cast<Eigen::Index>(x.size());
    ConstCMap xm(x.data(), n);
    CMap ym(y.data(), static_cast<Eigen::Index>(y.size()));
    ym.noalias() = A * xm;
}

inline void lu_solve(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, std::span<const cplx> b, std::span<cplx> x) {
    const auto n = static_cast<Eigen::Index>(b.size());
    ConstCMap bm(b.data(), n);
    const Eigen::VectorXd re = lu.solve(Eigen::VectorXd(bm.real()));
    const Eigen::VectorXd im = lu.solve(Eigen::VectorXd(bm.imag()));
    for (Eigen::Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = {re(i), im(i)};
}

}  // namespace detail

/// One level of the hierarchy: a Toeplitz or dense real matrix.
class MgLevel {
public:
    explicit MgLevel(ToeplitzCore t) : toeplitz_(true), T_(std::move(t)), n_(T_.size()) {
        diag_.assign(n_, T_.diagonal());
    }
    explicit MgLevel(Eigen::MatrixXd d) : toeplitz_(false), D_(std::move(d)), n_(static_cast<std::size_t>(D_.rows())) {
        if (D_.rows() != D_.cols()) throw ConfigError("matrix", "must be square");
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = D_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    }

    std::size_t size() const noexcept { return n_; }
    bool is_toeplitz() const noexcept { return toeplitz_; }
    const ToeplitzCore& toeplitz() const { return T_; }
    const std::vector<double>& diagonal() const noexcept { return diag_; }

    void apply(std::span<const cplx> x, std::span<cplx> y) const {
        if (toeplitz_) {
            if (n_ <= 32) T_.matvec_direct(x, y); else T_.matvec(x, y);
        } else {
            detail::dense_matvec(D_, x, y);
        }
    }

    Eigen::MatrixXd dense() const { return toeplitz_ ? T_.dense() : D_; }

    /// Galerkin coarse operator R A P.
    MgLevel coarsen() const {
        const std::size_t nc = (n_ - 1) / 2;
        static constexpr double wr[3] = {0.25, 0.5, 0.25};
        static constexpr double wp[3] = {0.5, 1.0, 0.5};
        if (toeplitz_) {
            auto a = [&](std::ptrdiff_t k) {
                const auto ak = static_cast<std::size_t>(k < 0 ? -k : k);
                return ak < n_ ? T_.offset(k) : 0.0;
            };
            auto c = [&](std::ptrdiff_t d) {
                double s = 0.0;
                for (int si = -1; si <= 1; ++si)
                    for (int ti = -1; ti <= 1; ++ti) s += wr[si + 1] * wp[ti + 1] * a(2 * d + si - ti);
                return s;
            };
            std::vector<double> col(nc), row(nc);
            for (std::size_t d = 0; d < nc; ++d) {
                col[d] = c(static_cast<std::ptrdiff_t>(d));
                row[d] = c(-static_cast<std::ptrdiff_t>(d));
            }
            return MgLevel(ToeplitzCore(std::move(col), std::move(row)));
        }
        const auto n = static_cast<Eigen::Index>(n_);
        const auto m = static_cast<Eigen::Index>(nc);
        Eigen::MatrixXd AP = Eigen::MatrixXd::Zero(n, m);
        for (Eigen::Index J = 0; J < m; ++J)
            for (int t = 0; t < 3; ++t) AP.col(J) += wp[t] * D_.col(2 * J + t);
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index I = 0; I < m; ++I)
            for (int s = 0; s < 3; ++s) C.row(I) += wr[s] * AP.row(2 * I + s);
        return MgLevel(std::move(C));
    }

private:
    bool toeplitz_;
    ToeplitzCore T_;
    Eigen::MatrixXd D_;
    std::size_t n_;
    std::vector<double> diag_;
};

/// Multigrid hierarchy for one time-independent system matrix.
class MgHierarchy {
public:
    MgHierarchy(MgLevel fine, MgConfig cfg = {}) : cfg_(cfg) {
        if (fine.size() == 0) throw ConfigError("matrix", "empty system");
        levels_.push_back(std::move(fine));
        while (levels_.back().size() > cfg_.coarsest && (levels_.back().size() - 1) / 2 >= 1) {
            levels_.push_back(levels_.back().coarsen());
        }
        coarse_lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(levels_.back().dense());
        fallback_ = std::make_shared<FallbackState>();
    }

    const MgConfig& config() const noexcept { return cfg_; }
    std::size_t depth() const noexcept { return levels_.size(); }
    const MgLevel& level(std::size_t l) const { return levels_.at(l); }
    std::size_t size() const noexcept { return levels_.front().size(); }

    void apply(std::span<const cplx> x, std::span<cplx> y) const { levels_.front().apply(x, y); }

    /// One V-cycle on level l, improving u in place.
    void vcycle(std::size_t l, std::span<cplx> u, std::span<const cplx> b) const {
        const MgLevel& A = levels_[l];
        const std::size_t n = A.size();
        if (l + 1 == levels_.size()) {
            detail::lu_solve(*coarse_lu_, b, u);
            return;
        }
        CVector r(n);
        smooth(A, u, b, r, cfg_.pre_smooth);
        residual(A, u, b, r);
        const std::size_t nc = levels_[l + 1].size();
        CVector rc(nc), ec(nc, cplx{});
        for (std::size_t J = 0; J < nc; ++J) rc[J] = 0.25 * r[2 * J] + 0.5 * r[2 * J + 1] + 0.25 * r[2 * J + 2];
        vcycle(l + 1, ec, rc);
        for (std::size_t J = 0; J < nc; ++J) {
            u[2 * J] += 0.5 * ec[J];
            u[2 * J + 1] += ec[J];
            u[2 * J + 2] += 0.5 * ec[J];
        }
        smooth(A, u, b, r, cfg_.post_smooth);
    }

    /// Iterate V-cycles from the initial guess in u until the relative residual
    /// drops below tol; dense LU takes over on stagnation or cycle exhaustion.
    SolveReport solve(std::span<const cplx> b, std::span<cplx> u) const {
        const auto t0 = std::chrono::steady_clock::now();
        SolveReport rep;
        const std::size_t n = size();
        if (b.size() != n || u.size() != n) throw ConfigError("rhs", "length must equal system size");
        const double bn = detail::norm2(b);
        if (bn == 0.0) {
            std::fill(u.begin(), u.end(), cplx{});
            rep.seconds = elapsed(t0);
            return rep;
        }
        CVector r(n);
        if (fallback_->sticky) {
            dense_solve(b, u);
            residual(levels_.front(), u, b, r);
            rep.rel_residual = detail::norm2(r) / bn;
            rep.fallback = true;
            rep.note = "dense LU (multigrid previously stagnated)";
            rep.seconds = elapsed(t0);
            return rep;
        }
        residual(levels_.front(), u, b, r);
        std::vector<double> hist{detail::norm2(r) / bn};
        while (hist.back() > cfg_.tol) {
            if (rep.iterations >= cfg_.max_cycles || stagnated(hist)) {
                rep.note = rep.iterations >= cfg_.max_cycles ? "multigrid hit the cycle limit; dense LU used"
                                                             : "multigrid stagnated; dense LU used";
                fallback_->sticky = true;
                dense_solve(b, u);
                residual(levels_.front(), u, b, r);
                hist.push_back(detail::norm2(r) / bn);
                rep.fallback = true;
                break;
            }
            vcycle(0, u, b);
            ++rep.iterations;
            residual(levels_.front(), u, b, r);
            hist.push_back(detail::norm2(r) / bn);
            if (!std::isfinite(hist.back())) hist.back() = INFINITY;
        }
        rep.rel_residual = hist.back();
        rep.seconds = elapsed(t0);
        return rep;
    }

    /// Direct solve with the fine matrix (factorised on first use).
    void dense_solve(std::span<const cplx> b, std::span<cplx> u) const {
        std::call_once(fallback_->once, [&] {
            if (size() > cfg_.max_dense_fallback) return;
            fallback_->lu = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(levels_.front().dense());
        });
        if (!fallback_->lu) throw NumericError("multigrid failed and the system is too large for dense LU");
        detail::lu_solve(*fallback_->lu, b, u);
    }

private:
    struct FallbackState {
        std::once_flag once;
        std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
        std::atomic<bool> sticky{false};
    };

    static double elapsed(std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    bool stagnated(const std::vector<double>& hist) const {
        const auto w = static_cast<std::size_t>(cfg_.stagnation_window);
        if (hist.size() <= w) return false;
        const double prev = hist[hist.size() - 1 - w];
        return !(prev >= cfg_.stagnation_factor * hist.back());
    }

    static void residual(const MgLevel& A, std::span<const cplx> u, std::span<const cplx> b, std::span<cplx> r) {
        A.apply(u, r);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    }

    void smooth(const MgLevel& A, std::span<cplx> u, std::span<const cplx> b, std::span<cplx> r, int sweeps) const {
        const auto& d = A.diagonal();
        for (int s = 0; s < sweeps; ++s) {
            residual(A, u, b, r);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] += cfg_.damping * r[i] / d[i];
        }
    }

    MgConfig cfg_;
    std::vector<MgLevel> levels_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> coarse_lu_;
    std::shared_ptr<FallbackState> fallback_;
};

}  // namespace fracfk
