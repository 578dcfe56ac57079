#pragma once

// Time marching for
//   C^s D_t^gamma G = K nabla^{alpha,lambda} G + f,  G(x,0) = G0,  G(a,t) = B_a, G(b,t) = B_b,
// with the substantial derivative built on d/dt - J rho U(x).
//
// Each step solves (l_0 I - kappa L) G^n = R^n over the interior nodes, where
// L is the homogeneous operator H or the boundary-corrected operator and
// kappa = -K kappa_alpha tau^gamma / h^alpha.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/coeffs.hpp"
#include "fracfk/corrections.hpp"
#include "fracfk/error.hpp"
#include "fracfk/krylov.hpp"
#include "fracfk/multigrid.hpp"
#include "fracfk/onesided.hpp"
#include "fracfk/space_operator.hpp"
#include "fracfk/substantial.hpp"

namespace fracfk {

struct ProblemSpec {
    double alpha = 1.5;
    double gamma = 0.5;
    double lambda = 0.0;
    double K = 1.0;
    double rho = 0.0;
    double a = 0.0;
    double b = 1.0;
    double T = 1.0;
    std::function<double(double)> U;                ///< defaults to 0
    std::function<cplx(double)> G0;                 ///< defaults to 0
    std::function<cplx(double)> BCa;                ///< defaults to 0
    std::function<cplx(double)> BCb;                ///< defaults to 0
    std::function<cplx(double, double)> f;          ///< f(x, t); empty means no forcing
};

/// How the first levels are obtained when initial corrections (m1 >= 1) are on.
enum class StartMode {
    Coupled,    ///< solve the levels that enter the correction stencils as one block
    Bootstrap,  ///< take them from the uncorrected scheme, then restart with corrections frozen
};

struct SchemeConfig {
    int nu = 2;
    double r3 = 0.0;
    int m1 = 0;
    int m2 = 1;
    bool corrected = false;
    std::size_t M = 16;
    std::size_t N = 16;
    MgConfig mg;
    KrylovConfig krylov;
    StartMode start = StartMode::Coupled;
    bool keep_history = false;
    bool warm_start = false;  ///< start each solve from the previous level instead of zero
};

struct Solution {
    std::vector<double> x;                 ///< nodes x_0..x_M
    CVector final;                         ///< G(., T) on nodes 0..M
    std::vector<CVector> history;          ///< levels 0..N when requested
    std::vector<SolveReport> reports;      ///< one per linear solve
    double seconds = 0.0;

    double mean_iterations() const {
        double s = 0.0;
        std::size_t c = 0;
        for (const auto& r : reports)
            if (r.iterations > 0 || !r.fallback) {
                s += r.iterations;
                ++c;
            }
        return c ? s / static_cast<double>(c) : 0.0;
    }
    bool any_fallback() const {
        for (const auto& r : reports)
            if (r.fallback) return true;
        return false;
    }
};

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

inline void validate(const ProblemSpec& p, const SchemeConfig& c) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0)) throw ConfigError("alpha", "must lie in (1, 2)");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("gamma", "must lie in (0, 1)");
    if (!(p.lambda >= 0.0)) throw ConfigError("lambda", "must be non-negative");
    if (!(p.K > 0.0)) throw ConfigError("K", "must be positive");
    if (!(p.b > p.a)) throw ConfigError("b", "interval must satisfy b > a");
    if (!(p.T > 0.0)) throw ConfigError("T", "must be positive");
    if (!std::isfinite(p.rho)) throw ConfigError("rho", "must be finite");
    if (c.nu < 1 || c.nu > 4) throw ConfigError("nu", "supported orders are 1..4");
    if (c.M < 3) throw ConfigError("M", "need at least 3 intervals");
    if (c.N < 1) throw ConfigError("N", "need at least one time step");
    if (c.m1 < 0 || c.m1 > 2) throw ConfigError("m1", "initial corrections are tabulated for m1 <= 2");
    if (c.m1 > 0 && static_cast<std::size_t>(c.m1 + c.nu - 1) > c.N)
        throw ConfigError("N", "fewer time levels than the initial-correction stencils need");
    if (c.corrected && (c.m2 < c.nu - 1 || c.m2 > 2))
        throw ConfigError("m2", "must satisfy nu - 1 <= m2 <= 2");
    (void)shift_triple(p.alpha, c.r3);
}

namespace detail {

/// Everything about a run that does not change from step to step.
struct MarchSetup {
    std::size_t M = 0, N = 0;
    double h = 0.0, tau = 0.0, kappa = 0.0, tau_gamma = 0.0;
    TimeWeightSeq l;
    std::vector<double> x, U, theta;
    std::vector<double> coeff_a, coeff_b;  ///< boundary couplings, index 0..M-2 for interior rows
    std::optional<MgHierarchy> mg;
    std::vector<std::vector<cplx>> stencil;  ///< [q-1][i * width + p]: b_p^{q, -J theta_i}, q = 1..m1
    std::vector<std::size_t> stencil_width;
};

inline MarchSetup make_setup(const ProblemSpec& p, const SchemeConfig& c) {
    MarchSetup s;
    s.M = c.M;
    s.N = c.N;
    s.h = (p.b - p.a) / static_cast<double>(c.M);
    s.tau = p.T / static_cast<double>(c.N);
    s.tau_gamma = std::pow(s.tau, p.gamma);
    s.kappa = -p.K * riesz_kappa(p.alpha) * s.tau_gamma / std::pow(s.h, p.alpha);
    s.l = lubich_time_weights(c.nu, p.gamma, c.N);
    s.x.resize(c.M + 1);
    s.U.resize(c.M + 1);
    s.theta.resize(c.M + 1);
    for (std::size_t i = 0; i <= c.M; ++i) {
        s.x[i] = i == c.M ? p.b : p.a + static_cast<double>(i) * s.h;
        s.U[i] = p.U ? p.U(s.x[i]) : 0.0;
        s.theta[i] = p.rho * s.U[i] * s.tau;
    }
    const ShiftTriple tr = shift_triple(p.alpha, c.r3);
    const std::size_t n = c.M - 1;
    const double l0 = s.l[0];
    s.coeff_a.resize(n);
    s.coeff_b.resize(n);
    if (!c.corrected) {
        const TemperedWeightSeq w = tempered_weights(p.alpha, p.lambda, s.h, tr, c.M + 1);
        const RieszOperator op = assemble_riesz(w, c.M, p.K, s.tau, p.gamma);
        std::vector<double> col(n);
        for (std::size_t d = 0; d < n; ++d) col[d] = -s.kappa * op.core.first_col()[d];
        col[0] += l0;
        s.mg.emplace(MgLevel(ToeplitzCore(col, col)), c.mg);
        for (std::size_t i = 1; i < c.M; ++i) {
            s.coeff_a[i - 1] = op.left_boundary_coeff(i);
            s.coeff_b[i - 1] = op.right_boundary_coeff(i);
        }
    } else {
        const CorrectedMatrix cm = assemble_corrected_matrix(c.M, {p.alpha, p.lambda, s.h, tr, c.nu, c.m2});
        Eigen::MatrixXd A = -s.kappa * cm.dense();
        A.diagonal().array() += l0;
        s.mg.emplace(MgLevel(std::move(A)), c.mg);
        for (std::size_t i = 1; i < c.M; ++i) {
            s.coeff_a[i - 1] = cm.left_boundary_coeff(i);
            s.coeff_b[i - 1] = cm.right_boundary_coeff(i);
        }
    }
    for (int q = 1; q <= c.m1; ++q) {
        const std::size_t wdt = static_cast<std::size_t>(q + c.nu);
        std::vector<cplx> tab((c.M + 1) * wdt);
        for (std::size_t i = 0; i <= c.M; ++i) {
            const auto st = onesided_coeffs(q, c.nu, cplx(0.0, -s.theta[i]), StencilSide::Left);
            for (std::size_t pp = 0; pp < wdt; ++pp) tab[i * wdt + pp] = st.coeffs[pp];
        }
        s.stencil.push_back(std::move(tab));
        s.stencil_width.push_back(wdt);
    }
    return s;
}

/// Known part of the step-n right-hand side at interior row i (node i): forcing,
/// boundary elimination and the initial term e^{J theta n} G^0 sum_{k<n} l_k.
inline cplx known_rhs(const MarchSetup& s, const ProblemSpec& p, std::size_t n, std::size_t i,
                      const CVector& g0, double lsum, cplx bca, cplx bcb) {
    const double tn = static_cast<double>(n) * s.tau;
    cplx r = std::polar(1.0, s.theta[i] * static_cast<double>(n)) * lsum * g0[i];
    if (p.f) r += s.tau_gamma * p.f(s.x[i], tn);
    r += s.kappa * (s.coeff_a[i - 1] * bca + s.coeff_b[i - 1] * bcb);
    return r;
}

/// sum_{k=1}^{n-1} l_k e^{J theta_i k} G_i^{n-k} over levels stored in `levels`.
inline cplx history_tail(const MarchSetup& s, const std::vector<CVector>& levels, std::size_t n, std::size_t i) {
    const cplx z = std::polar(1.0, s.theta[i]);
    cplx zk = z;
    cplx acc{};
    for (std::size_t k = 1; k < n; ++k) {
        acc += s.l[k] * zk * levels[n - k][i];
        zk *= z;
    }
    return acc;
}

/// c_{n,q} for q = 1..m1.
inline std::vector<double> correction_coeffs(const MarchSetup& s, std::size_t n, int m1) {
    std::vector<double> c;
    for (int q = 1; q <= m1; ++q) c.push_back(initial_correction_coeff(s.l, n, q));
    return c;
}

}  // namespace detail

/// March the scheme from t = 0 to T.
inline Solution run(const ProblemSpec& p, const SchemeConfig& c) {
    validate(p, c);
    const auto t0 = std::chrono::steady_clock::now();
    detail::MarchSetup s = detail::make_setup(p, c);
    const std::size_t M = c.M, N = c.N, n_int = M - 1;
    const MgHierarchy& mg = *s.mg;

    std::vector<CVector> levels;
    levels.reserve(N + 1);
    CVector g0(M + 1);
    for (std::size_t i = 0; i <= M; ++i) g0[i] = p.G0 ? p.G0(s.x[i]) : cplx{};
    levels.push_back(g0);

    Solution sol;
    sol.x = s.x;
    std::vector<double> lsum(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) lsum[n] = lsum[n - 1] + s.l[n - 1];
    auto bc = [&](const std::function<cplx(double)>& f, std::size_t n) {
        return f ? f(static_cast<double>(n) * s.tau) : cplx{};
    };

    // D[q-1][i] = sum_p b_p^{q} G_i^p (tau^q-scaled derivative at t = 0), once known.
    std::vector<CVector> D;
    auto compute_D = [&](const std::vector<CVector>& lv) {
        D.assign(static_cast<std::size_t>(c.m1), CVector(M + 1));
        for (int q = 1; q <= c.m1; ++q) {
            const std::size_t wdt = s.stencil_width[static_cast<std::size_t>(q - 1)];
            const auto& tab = s.stencil[static_cast<std::size_t>(q - 1)];
            for (std::size_t i = 0; i <= M; ++i) {
                cplx acc{};
                for (std::size_t pp = 0; pp < wdt; ++pp) acc += tab[i * wdt + pp] * lv[pp][i];
                D[static_cast<std::size_t>(q - 1)][i] = acc;
            }
        }
    };

    // Plain step: everything except G^n known.
    auto step = [&](std::size_t n, bool use_correction) {
        const cplx bca = bc(p.BCa, n), bcb = bc(p.BCb, n);
        CVector rhs(n_int);
        const std::vector<double> cc = use_correction ? detail::correction_coeffs(s, n, c.m1) : std::vector<double>{};
        for (std::size_t i = 1; i < M; ++i) {
            cplx r = detail::known_rhs(s, p, n, i, levels[0], lsum[n], bca, bcb) - detail::history_tail(s, levels, n, i);
            if (use_correction) {
                cplx corr{};
                for (std::size_t q = 0; q < cc.size(); ++q) corr += cc[q] * D[q][i];
                r += std::polar(1.0, s.theta[i] * static_cast<double>(n)) * corr;
            }
            rhs[i - 1] = r;
        }
        CVector u(n_int);
        const CVector& prev = levels[n - 1];
        if (c.warm_start)
            for (std::size_t i = 0; i < n_int; ++i) u[i] = prev[i + 1];
        SolveReport rep = mg.solve(rhs, u);
        if (!std::isfinite(rep.rel_residual) || rep.rel_residual > 1e-6) {
            throw NumericError("linear solve failed at step " + std::to_string(n));
        }
        sol.reports.push_back(std::move(rep));
        CVector g(M + 1);
        g[0] = bca;
        g[M] = bcb;
        for (std::size_t i = 0; i < n_int; ++i) g[i + 1] = u[i];
        levels.push_back(std::move(g));
    };

    std::size_t first = 1;
    if (c.m1 > 0) {
        const std::size_t P = static_cast<std::size_t>(c.m1 + c.nu - 1);
        if (c.start == StartMode::Bootstrap) {
            for (std::size_t n = 1; n <= P; ++n) step(n, false);
            compute_D(levels);
            levels.resize(1);
        } else {
            // Unknowns G^1..G^P stacked level-major over interior nodes.
            const std::size_t dim = P * n_int;
            std::vector<std::vector<double>> cc(P + 1);
            for (std::size_t n = 1; n <= P; ++n) cc[n] = detail::correction_coeffs(s, n, c.m1);
            auto coupling = [&](std::size_t n, std::size_t i, auto&& level_value) {
                // e^{J theta n} sum_q c_{n,q} sum_{p>=1} b_p^q G_i^p
                cplx acc{};
                for (int q = 1; q <= c.m1; ++q) {
                    const std::size_t wdt = s.stencil_width[static_cast<std::size_t>(q - 1)];
                    const auto& tab = s.stencil[static_cast<std::size_t>(q - 1)];
                    cplx dq{};
                    for (std::size_t pp = 1; pp < wdt; ++pp) dq += tab[i * wdt + pp] * level_value(pp);
                    acc += cc[n][static_cast<std::size_t>(q - 1)] * dq;
                }
                return std::polar(1.0, s.theta[i] * static_cast<double>(n)) * acc;
            };
            auto history_block = [&](std::span<const cplx> X, std::size_t n, std::size_t i) {
                const cplx z = std::polar(1.0, s.theta[i]);
                cplx zk = z, acc{};
                for (std::size_t k = 1; k < n; ++k) {
                    acc += s.l[k] * zk * X[(n - k - 1) * n_int + (i - 1)];
                    zk *= z;
                }
                return acc;
            };
            auto op = [&](std::span<const cplx> X, std::span<cplx> Y) {
                for (std::size_t n = 1; n <= P; ++n) {
                    std::span<const cplx> xn = X.subspan((n - 1) * n_int, n_int);
                    std::span<cplx> yn = Y.subspan((n - 1) * n_int, n_int);
                    mg.apply(xn, yn);
                    for (std::size_t i = 1; i < M; ++i) {
                        yn[i - 1] += history_block(X, n, i);
                        yn[i - 1] -= coupling(n, i, [&](std::size_t lev) {
                            return X[(lev - 1) * n_int + (i - 1)];
                        });
                    }
                }
            };
            auto prec = [&](std::span<const cplx> V, std::span<cplx> Z) {
                CVector rhs(n_int), u(n_int, cplx{});
                for (std::size_t n = 1; n <= P; ++n) {
                    for (std::size_t i = 1; i < M; ++i)
                        rhs[i - 1] = V[(n - 1) * n_int + (i - 1)] - history_block(std::span<const cplx>(Z.data(), Z.size()), n, i);
                    SolveReport r = mg.solve(rhs, u);
                    (void)r;
                    std::copy(u.begin(), u.end(), Z.begin() + static_cast<std::ptrdiff_t>((n - 1) * n_int));
                }
            };
            CVector B(dim), X(dim, cplx{});
            std::vector<cplx> bca(P + 1), bcb(P + 1);
            for (std::size_t n = 1; n <= P; ++n) {
                bca[n] = bc(p.BCa, n);
                bcb[n] = bc(p.BCb, n);
                for (std::size_t i = 1; i < M; ++i) {
                    // boundary-node levels never enter: stencils act on the node's own history
                    cplx r = detail::known_rhs(s, p, n, i, levels[0], lsum[n], bca[n], bcb[n]);
                    cplx acc{};
                    for (int q = 1; q <= c.m1; ++q) {
                        const std::size_t wdt = s.stencil_width[static_cast<std::size_t>(q - 1)];
                        acc += cc[n][static_cast<std::size_t>(q - 1)] *
                               s.stencil[static_cast<std::size_t>(q - 1)][i * wdt] * levels[0][i];
                    }
                    r += std::polar(1.0, s.theta[i] * static_cast<double>(n)) * acc;
                    B[(n - 1) * n_int + (i - 1)] = r;
                }
            }
            prec(B, X);  // block-triangular initial guess
            SolveReport rep = fgmres(op, prec, B, X, c.krylov);
            if (!std::isfinite(rep.rel_residual) || rep.rel_residual > 1e-8)
                throw NumericError("coupled start-up solve did not converge");
            rep.note = "coupled start-up block (" + std::to_string(P) + " levels)";
            sol.reports.push_back(rep);
            for (std::size_t n = 1; n <= P; ++n) {
                CVector g(M + 1);
                g[0] = bca[n];
                g[M] = bcb[n];
                for (std::size_t i = 1; i < M; ++i) g[i] = X[(n - 1) * n_int + (i - 1)];
                levels.push_back(std::move(g));
            }
            compute_D(levels);
            first = P + 1;
        }
    }
    for (std::size_t n = first; n <= N; ++n) step(n, c.m1 > 0);

    sol.final = levels.back();
    if (c.keep_history) sol.history = std::move(levels);
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

/// Max norm over nodes 0..M and discrete L2 norm sqrt(h sum_{interior} |e_i|^2).
inline ErrorNorms error_norms(const Solution& sol, const std::function<cplx(double)>& exact) {
    ErrorNorms e;
    const std::size_t M = sol.x.size() - 1;
    const double h = (sol.x.back() - sol.x.front()) / static_cast<double>(M);
    double s2 = 0.0;
    for (std::size_t i = 0; i <= M; ++i) {
        const double d = std::abs(sol.final[i] - exact(sol.x[i]));
        e.linf = std::max(e.linf, d);
        if (i > 0 && i < M) s2 += d * d;
    }
    e.l2 = std::sqrt(h * s2);
    return e;
}

}  // namespace fracfk
