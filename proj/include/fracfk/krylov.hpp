#pragma once

// Flexible GMRES(m) for complex systems given only as operator callables.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracfk/multigrid.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

struct KrylovConfig {
    double tol = 1e-10;
    std::size_t restart = 100;
    std::size_t max_iterations = 1000;
};

/// Solves A x = b with right preconditioning z = P(v); x holds the initial guess.
/// A(in, out) and P(in, out) write into preallocated spans.
template <class Op, class Prec>
SolveReport fgmres(Op&& A, Prec&& P, std::span<const cplx> b, std::span<cplx> x, const KrylovConfig& cfg = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = b.size();
    const std::size_t m = cfg.restart;
    SolveReport rep;
    const double bn = detail::norm2(b);
    if (bn == 0.0) {
        std::fill(x.begin(), x.end(), cplx{});
        return rep;
    }
    std::vector<CVector> V(m + 1, CVector(n)), Z(m, CVector(n));
    std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, cplx{}));
    std::vector<cplx> cs(m), sn(m), g(m + 1);
    CVector w(n);

    auto residual = [&](CVector& r) {
        A(std::span<const cplx>(x.data(), n), std::span<cplx>(r));
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return detail::norm2(r);
    };

    double rn = residual(V[0]);
    rep.rel_residual = rn / bn;
    while (rep.rel_residual > cfg.tol && static_cast<std::size_t>(rep.iterations) < cfg.max_iterations) {
        for (auto& v : V[0]) v /= rn;
        std::fill(g.begin(), g.end(), cplx{});
        g[0] = rn;
        std::size_t k = 0;
        for (; k < m && static_cast<std::size_t>(rep.iterations) < cfg.max_iterations; ++k) {
            ++rep.iterations;
            P(std::span<const cplx>(V[k]), std::span<cplx>(Z[k]));
            A(std::span<const cplx>(Z[k]), std::span<cplx>(w));
            for (std::size_t j = 0; j <= k; ++j) {  // modified Gram-Schmidt
                cplx hjk{};
                for (std::size_t i = 0; i < n; ++i) hjk += std::conj(V[j][i]) * w[i];
                H[j][k] = hjk;
                for (std::size_t i = 0; i < n; ++i) w[i] -= hjk * V[j][i];
            }
            const double hn = detail::norm2(w);
            H[k + 1][k] = hn;
            if (hn > 0.0)
                for (std::size_t i = 0; i < n; ++i) V[k + 1][i] = w[i] / hn;
            for (std::size_t j = 0; j < k; ++j) {
                const cplx t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
                H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
                H[j][k] = t;
            }
            const double den = std::sqrt(std::norm(H[k][k]) + std::norm(H[k + 1][k]));
            cs[k] = den == 0.0 ? cplx(1.0) : H[k][k] / den;
            sn[k] = den == 0.0 ? cplx{} : H[k + 1][k] / den;
            H[k][k] = den;
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = std::conj(cs[k]) * g[k];
            if (std::abs(g[k + 1]) / bn <= cfg.tol || hn == 0.0) {
                ++k;
                break;
            }
        }
        // back substitution on the k x k triangle
        std::vector<cplx> y(k);
        for (std::size_t ii = k; ii-- > 0;) {
            cplx s = g[ii];
            for (std::size_t j = ii + 1; j < k; ++j) s -= H[ii][j] * y[j];
            y[ii] = s / H[ii][ii];
        }
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * Z[j][i];
        rn = residual(V[0]);
        rep.rel_residual = rn / bn;
        if (!std::isfinite(rep.rel_residual)) break;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rep.rel_residual > cfg.tol) rep.note = "FGMRES did not reach the tolerance";
    return rep;
}

}  // namespace fracfk
