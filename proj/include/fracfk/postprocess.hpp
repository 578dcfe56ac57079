#pragma once

// From G(x, rho, t) on an integer rho grid to the joint density G(x, A, t).
//
// Convention: G^(rho) = int e^{J rho A} G(A) dA, so the inverse carries
// e^{-J rho A}. For rho = k in K_lo..K_lo+L-1 the discrete inverse is
//   G(A_m) = (1/L) sum_k G^(k) e^{-J k A_m},  A_m = 2 pi (m - L/2) / L.
//
// With L even, k = L/2 and k = -L/2 land in the same DFT slot. The grid only
// carries +L/2, so for conjugate-symmetric data the slot is given the mean of
// the two, Re G^(L/2); otherwise the output picks up an imaginary
// (-1)^m Im G^(L/2) / L ripple.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "fracfk/error.hpp"
#include "fracfk/fft.hpp"
#include "fracfk/solver.hpp"

namespace fracfk {

struct RhoGrid {
    int k_min = -39;
    int k_max = 40;

    std::size_t size() const noexcept { return static_cast<std::size_t>(k_max - k_min + 1); }
    double rho(std::size_t j) const noexcept { return static_cast<double>(k_min + static_cast<int>(j)); }
    /// A_m for output index m.
    double A(std::size_t m) const noexcept {
        const auto L = static_cast<double>(size());
        return 2.0 * std::numbers::pi * (static_cast<double>(m) - L / 2.0) / L;
    }
};

inline double gaussian_delta(double a_param, double x, double center) {
    if (!(a_param > 0.0)) throw ConfigError("a", "width parameter must be positive");
    const double d = x - center;
    return std::exp(-d * d / (4.0 * a_param)) / (2.0 * std::sqrt(a_param * std::numbers::pi));
}

struct FunctionalPdf {
    RhoGrid grid;
    std::vector<double> x;
    std::vector<double> A;
    std::vector<CVector> values;  ///< values[ix][m]

    double max_abs_real() const {
        double v = 0.0;
        for (const auto& row : values)
            for (const auto& z : row) v = std::max(v, std::abs(z.real()));
        return v;
    }
    double max_abs_imag() const {
        double v = 0.0;
        for (const auto& row : values)
            for (const auto& z : row) v = std::max(v, std::abs(z.imag()));
        return v;
    }
};

/// Inverse transform of one sample row (ordered k_min..k_max) by FFT.
inline CVector idft_row(const RhoGrid& grid, const CVector& samples) {
    const std::size_t L = grid.size();
    if (samples.size() != L) throw ConfigError("samples", "one value per rho required");
    // e^{-J k A_m} = e^{-2 pi J k m / L} e^{J pi k}: a forward DFT of (-1)^k G^(k)
    // over the standard layout k mod L.
    FftBuffer in(L), out(L);
    for (std::size_t j = 0; j < L; ++j) {
        const int k = grid.k_min + static_cast<int>(j);
        const std::size_t slot = static_cast<std::size_t>(((k % static_cast<int>(L)) + static_cast<int>(L)) % static_cast<int>(L));
        in[slot] = (k % 2 == 0 ? 1.0 : -1.0) * samples[j];
    }
    FftPlan(L).forward(in, out);
    CVector res(L);
    for (std::size_t m = 0; m < L; ++m) res[m] = out[m] / static_cast<double>(L);
    return res;
}

/// Direct O(L^2) evaluation of the same sum.
inline CVector idft_row_direct(const RhoGrid& grid, const CVector& samples) {
    const std::size_t L = grid.size();
    if (samples.size() != L) throw ConfigError("samples", "one value per rho required");
    CVector res(L);
    for (std::size_t m = 0; m < L; ++m) {
        cplx acc{};
        for (std::size_t j = 0; j < L; ++j) acc += samples[j] * std::polar(1.0, -grid.rho(j) * grid.A(m));
        res[m] = acc / static_cast<double>(L);
    }
    return res;
}

/// Forward map back to rho samples: G^(k) = sum_m G(A_m) e^{J k A_m}.
inline CVector dft_row(const RhoGrid& grid, const CVector& values) {
    const std::size_t L = grid.size();
    if (values.size() != L) throw ConfigError("values", "one value per A node required");
    CVector res(L);
    for (std::size_t j = 0; j < L; ++j) {
        cplx acc{};
        for (std::size_t m = 0; m < L; ++m) acc += values[m] * std::polar(1.0, grid.rho(j) * grid.A(m));
        res[j] = acc;
    }
    return res;
}

enum class Nyquist {
    Raw,      ///< use the +L/2 sample as given
    Average,  ///< mean of the +L/2 and -L/2 samples under conjugate symmetry
};

/// samples[j][ix]: solution at rho_j on node ix.
inline FunctionalPdf idft_over_rho(const RhoGrid& grid, const std::vector<double>& x,
                                   const std::vector<CVector>& samples, Nyquist nyq = Nyquist::Average) {
    if (samples.size() != grid.size()) throw ConfigError("samples", "one solution per rho required");
    FunctionalPdf pdf;
    pdf.grid = grid;
    pdf.x = x;
    for (std::size_t m = 0; m < grid.size(); ++m) pdf.A.push_back(grid.A(m));
    pdf.values.resize(x.size());
    for (std::size_t ix = 0; ix < x.size(); ++ix) {
        CVector row(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (samples[j].size() != x.size()) throw ConfigError("samples", "node count mismatch");
            row[j] = samples[j][ix];
        }
        if (nyq == Nyquist::Average && grid.size() % 2 == 0 &&
            grid.k_max == static_cast<int>(grid.size() / 2))
            row.back() = row.back().real();
        pdf.values[ix] = idft_row(grid, row);
    }
    return pdf;
}

/// The occupation-time simulation: Gaussian start, absorbing ends, one solve per rho.
struct PdfConfig {
    double alpha = 1.5;
    double gamma = 0.5;
    double lambda = 0.1;
    double K = 1.0;
    double T = 1.0;
    double a_param = 0.001;  ///< Gaussian width parameter
    double x0 = 0.5;
    double u_lo = 0.25;      ///< U = 1 on (u_lo, u_hi), 0 elsewhere
    double u_hi = 0.75;
    bool u_zero = false;     ///< U = 0 everywhere
    RhoGrid grid;
    SchemeConfig scheme = [] {
        SchemeConfig c;
        c.nu = 2;
        c.r3 = 0.0;
        c.m1 = 0;
        c.m2 = 1;
        c.corrected = true;
        c.M = 100;
        c.N = 100;
        return c;
    }();
};

struct PdfResult {
    std::vector<CVector> samples;  ///< samples[j]: G(., rho_j, T) on nodes 0..M
    FunctionalPdf pdf;
    double mean_iterations = 0.0;
};

/// Runs the rho solves on up to `threads` workers and transforms the result.
inline PdfResult simulate_pdf(const PdfConfig& cfg, unsigned threads = 1) {
    const std::size_t L = cfg.grid.size();
    PdfResult out;
    out.samples.resize(L);
    std::vector<double> iters(L, 0.0);
    std::vector<std::string> failures(L);
    std::vector<double> x;
    auto solve_one = [&](std::size_t j) {
        ProblemSpec p;
        p.alpha = cfg.alpha;
        p.gamma = cfg.gamma;
        p.lambda = cfg.lambda;
        p.K = cfg.K;
        p.T = cfg.T;
        p.rho = cfg.grid.rho(j);
        const double lo = cfg.u_lo, hi = cfg.u_hi;
        const bool zero = cfg.u_zero;
        p.U = [lo, hi, zero](double s) { return !zero && s > lo && s < hi ? 1.0 : 0.0; };
        const double ap = cfg.a_param, c = cfg.x0;
        p.G0 = [ap, c](double s) { return cplx(gaussian_delta(ap, s, c)); };
        try {
            Solution s = run(p, cfg.scheme);
            iters[j] = s.mean_iterations();
            if (j == 0) x = s.x;
            out.samples[j] = std::move(s.final);
        } catch (const Error& e) {
            failures[j] = e.what();
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(L)));
    if (nt == 1) {
        for (std::size_t j = 0; j < L; ++j) solve_one(j);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < L; j += nt) solve_one(j);
            });
    }
    for (std::size_t j = 0; j < L; ++j)
        if (!failures[j].empty())
            throw NumericError("solve failed at rho = " + std::to_string(cfg.grid.k_min + static_cast<int>(j)) + ": " + failures[j]);
    out.pdf = idft_over_rho(cfg.grid, x, out.samples);
    double s = 0.0;
    for (double v : iters) s += v;
    out.mean_iterations = s / static_cast<double>(L);
    return out;
}

}  // namespace fracfk
