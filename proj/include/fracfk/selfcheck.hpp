#pragma once

// Executable invariants of the discretisation, shared by the command-line
// self-test and the acceptance driver. Each check returns a verdict and a short
// measured detail string; none of them depends on tabulated reference numbers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/coeffs.hpp"
#include "fracfk/error.hpp"
#include "fracfk/solver.hpp"
#include "fracfk/space_operator.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelfCheckOptions {
    /// Fault injection: negate omega_1 before assembling H (mutation test of the row-sum check).
    bool flip_omega1 = false;
    std::uint64_t seed = 20240611;
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

inline TemperedWeightSeq check_weights(double alpha, double lambda, double h, double r3, std::size_t n,
                                       const SelfCheckOptions& o) {
    TemperedWeightSeq w = tempered_weights(alpha, lambda, h, shift_triple(alpha, r3), n);
    if (o.flip_omega1) w.values[1] = -w.values[1];
    return w;
}

}  // namespace detail

/// 1 / (n^gamma Gamma(1-gamma)) < sum_{k<n} g_k^gamma <= n^{-gamma}.
inline CheckResult check_grunwald_partial_sums(std::size_t n_max = 10000) {
    CheckResult r{"grunwald partial-sum bounds", true, {}};
    double worst = INFINITY;
    for (double gamma : {0.1, 0.5, 0.9}) {
        const GrunwaldSeq g = grunwald_weights(gamma, n_max);
        double s = 0.0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            s += g[n - 1];
            const double nd = static_cast<double>(n);
            const double lo = 1.0 / (std::pow(nd, gamma) * std::tgamma(1.0 - gamma));
            const double hi = std::pow(nd, -gamma);
            if (!(s > lo && s <= hi * (1.0 + 1e-14))) {
                r.pass = false;
                r.detail = detail::fmt("violated at gamma=%g, n=%g", gamma, nd);
                return r;
            }
            worst = std::min(worst, (s - lo) / lo);
        }
    }
    r.detail = detail::fmt("n <= %g, smallest margin over the lower bound %.3e", static_cast<double>(n_max), worst);
    return r;
}

/// phi_1 < 0, phi_0 + phi_2 >= 0, phi_j > 0 (j >= 3) for random feasible (alpha, r3, lambda h).
inline CheckResult check_sign_pattern(const SelfCheckOptions& o = {}, int samples = 50) {
    CheckResult r{"H sign pattern on random feasible parameters", true, {}};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> ua(1.02, 1.98), u01(0.0, 1.0);
    const std::size_t n = 400;
    for (int s = 0; s < samples; ++s) {
        const double alpha = ua(rng);
        const R3Interval iv = r3_interval(alpha);
        const double r3 = iv.lo + (iv.hi - iv.lo) * u01(rng);
        const double lh = u01(rng);
        const TemperedWeightSeq w = detail::check_weights(alpha, lh, 1.0, r3, n, o);
        const std::vector<double> phi = riesz_phi(w);
        bool ok = phi[1] < 0.0 && phi[0] + phi[2] >= 0.0;
        for (std::size_t j = 3; j <= n && ok; ++j) ok = phi[j] > 0.0;
        if (!ok) {
            r.pass = false;
            r.detail = detail::fmt("fails at alpha=%.4f, lambda h=%.4f", alpha, lh);
            return r;
        }
    }
    r.detail = std::to_string(samples) + " samples";
    return r;
}

/// Row sums of H are non-positive and -h_ii exceeds the off-diagonal row sum.
inline CheckResult check_row_sums(const SelfCheckOptions& o = {}, std::size_t M = 64) {
    CheckResult r{"H row sums and diagonal dominance", true, {}};
    double margin = INFINITY;
    for (double alpha : {1.3, 1.8})
        for (double lambda : {0.0, 0.2, 0.7}) {
            const double h = 1.0 / static_cast<double>(M);
            const TemperedWeightSeq w = detail::check_weights(alpha, lambda, h, 0.0, M + 1, o);
            const Eigen::MatrixXd H = assemble_riesz(w, M, 1.0, 1.0, 0.5).core.dense();
            for (Eigen::Index i = 0; i < H.rows(); ++i) {
                const double off = H.row(i).sum() - H(i, i);
                if (!(H.row(i).sum() <= 0.0 && -H(i, i) > off)) {
                    r.pass = false;
                    r.detail = detail::fmt("row %g fails for alpha=%g", static_cast<double>(i), alpha);
                    return r;
                }
                margin = std::min(margin, -H(i, i) - off);
            }
        }
    r.detail = detail::fmt("M=%g, smallest dominance margin %.3e", static_cast<double>(M), margin);
    return r;
}

/// All eigenvalues of H are negative; l_0 I - kappa H has spectrum above l_0.
inline CheckResult check_eigenvalues(const SelfCheckOptions& o = {}, std::size_t M = 32) {
    CheckResult r{"H negative definite", true, {}};
    double top = -INFINITY;
    for (double alpha : {1.3, 1.8})
        for (double lambda : {0.0, 0.2, 0.7}) {
            const double h = 1.0 / static_cast<double>(M);
            const TemperedWeightSeq w = detail::check_weights(alpha, lambda, h, 0.0, M + 1, o);
            const RieszOperator op = assemble_riesz(w, M, 1.0, h, 0.5);
            const Eigen::MatrixXd H = op.core.dense();
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues();
            top = std::max(top, ev.maxCoeff());
            const double l0 = lubich_time_weights(2, 0.5, 1)[0];
            Eigen::MatrixXd S = -op.kappa_scaled * H;
            S.diagonal().array() += l0;
            const double smin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().minCoeff();
            if (!(ev.maxCoeff() < 0.0) || !(smin > l0)) {
                r.pass = false;
                r.detail = detail::fmt("alpha=%g, lambda=%g", alpha, lambda);
                return r;
            }
        }
    r.detail = detail::fmt("largest eigenvalue %.4e", top);
    return r;
}

/// FFT Toeplitz product against the dense product.
inline CheckResult check_toeplitz_matvec(const SelfCheckOptions& o = {}) {
    CheckResult r{"Toeplitz FFT matvec vs dense", true, {}};
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (std::size_t n : {15u, 129u, 513u}) {
        const std::size_t M = n + 1;
        const TemperedWeightSeq w = detail::check_weights(1.5, 0.3, 1.0 / static_cast<double>(M), 0.0, M + 1, o);
        const ToeplitzCore A = assemble_left_matrix(w, M);
        CVector x(n);
        for (auto& z : x) z = {u(rng), u(rng)};
        const CVector y = A.matvec(x);
        const Eigen::MatrixXd D = A.dense();
        for (std::size_t i = 0; i < n; ++i) {
            cplx ref{};
            for (std::size_t j = 0; j < n; ++j) ref += D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
            worst = std::max(worst, std::abs(ref - y[i]));
        }
    }
    r.pass = worst <= 1e-12;
    r.detail = detail::fmt("max abs difference %.3e", worst);
    return r;
}

/// First-order scheme: a perturbation of the initial data never grows in the max norm.
inline CheckResult check_stability(const SelfCheckOptions& o = {}, int trials = 10, std::size_t steps = 100) {
    CheckResult r{"max-norm stability of the first-order scheme", true, {}};
    std::mt19937_64 rng(o.seed + 2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Case { double alpha, gamma, lambda, rho; };
    const Case cases[] = {{1.3, 0.8, 0.7, 1.0}, {1.8, 0.3, 0.2, -3.0}, {1.5, 0.5, 0.0, 0.0}, {1.1, 0.9, 1.0, 10.0}};
    const std::size_t M = 32;
    double worst = 0.0;
    for (double tau : {1.0 / 8.0, 1.0 / 64.0})
        for (const Case& c : cases)
            for (int t = 0; t < trials; ++t) {
                std::vector<double> eps(M + 1, 0.0);
                for (std::size_t i = 1; i < M; ++i) eps[i] = u(rng);
                ProblemSpec p;
                p.alpha = c.alpha;
                p.gamma = c.gamma;
                p.lambda = c.lambda;
                p.rho = c.rho;
                p.T = tau * static_cast<double>(steps);
                p.U = [](double x) { return x; };
                p.G0 = [&eps](double x) { return cplx(eps[static_cast<std::size_t>(std::lround(x * M))]); };
                SchemeConfig cfg;
                cfg.nu = 1;
                cfg.M = M;
                cfg.N = steps;
                cfg.keep_history = true;
                const Solution s = run(p, cfg);
                double e0 = 0.0;
                for (double v : eps) e0 = std::max(e0, std::abs(v));
                for (const CVector& lv : s.history) {
                    double en = 0.0;
                    for (const cplx& z : lv) en = std::max(en, std::abs(z));
                    worst = std::max(worst, en / e0);
                }
            }
    r.pass = worst <= 1.0 + 1e-12;
    r.detail = detail::fmt("largest ratio ||e^n|| / ||e^0|| = %.6f", worst);
    return r;
}

/// r3 outside the feasible interval is rejected.
inline CheckResult check_feasibility_validator() {
    CheckResult r{"r3 feasibility validator", false, {}};
    const R3Interval iv = r3_interval(1.5);
    try {
        (void)shift_triple(1.5, iv.hi + 0.01);
        r.detail = "accepted an infeasible r3";
    } catch (const FeasibilityError& e) {
        r.pass = true;
        r.detail = e.what();
    }
    return r;
}

/// sum_j e^{-(j-1) lambda h} omega_j vanishes for lambda h > 0 (zero row sum of the infinite operator).
inline CheckResult check_tail_identity(const SelfCheckOptions& o = {}, std::size_t n = 10000) {
    CheckResult r{"tempered weight tail identity", true, {}};
    double worst = 0.0;
    for (double alpha : {1.3, 1.8})
        for (double lh : {0.05, 0.2, 0.7}) {
            const TemperedWeightSeq w = detail::check_weights(alpha, lh, 1.0, 0.0, n, o);
            const std::vector<double> phi = riesz_phi(w);
            double s = 0.0;
            for (double v : phi) s += v;
            worst = std::max(worst, std::abs(s));
        }
    r.pass = worst <= 1e-8;
    r.detail = detail::fmt("largest |sum| %.3e", worst);
    return r;
}

inline std::vector<CheckResult> run_self_checks(const SelfCheckOptions& o = {}) {
    return {check_grunwald_partial_sums(), check_sign_pattern(o),     check_row_sums(o),
            check_eigenvalues(o),          check_toeplitz_matvec(o),  check_tail_identity(o),
            check_stability(o),            check_feasibility_validator()};
}

}  // namespace fracfk
