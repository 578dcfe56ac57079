#pragma once

// Scalar coefficient sequences: Grünwald weights, shift-parameter triples,
// tempered shifted-Grünwald weights and Lubich-type time weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fracfk/error.hpp"

namespace fracfk {

/// Coefficients g_j of (1 - z)^order, generated by g_0 = 1, g_j = (1 - (order+1)/j) g_{j-1}.
struct GrunwaldSeq {
    double order = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }
    /// g_j with g_j = 0 for j < 0.
    double at_or_zero(std::ptrdiff_t j) const {
        return j < 0 ? 0.0 : values[static_cast<std::size_t>(j)];
    }
};

inline GrunwaldSeq grunwald_weights(double order, std::size_t n) {
    GrunwaldSeq seq{order, std::vector<double>(n + 1)};
    seq.values[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        seq.values[j] = (1.0 - (order + 1.0) / static_cast<double>(j)) * seq.values[j - 1];
    }
    return seq;
}

/// Interval of r3 for which the symmetric part H of the shifted-Grünwald
/// matrix keeps the sign pattern phi_1 < 0, phi_0 + phi_2 >= 0, phi_j > 0 (j >= 3).
struct R3Interval {
    double lo;
    double hi;

    bool contains(double r3) const noexcept { return r3 >= lo && r3 <= hi; }
};

inline R3Interval r3_interval(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ConfigError("alpha", "must lie in (1, 2)");
    }
    const double a = alpha;
    const double lo1 = -a * (a - 1.0) * (a + 2.0) / (2.0 * (a * a + 3.0 * a + 4.0));
    const double lo2 = -(2.0 - a) * (8.0 - a * a - a) / (2.0 * (a + 1.0) * (a + 2.0));
    const double hi = (a - 1.0) * (2.0 - a) * (a + 3.0) / (2.0 * (a + 1.0) * (a + 2.0));
    return {std::max(lo1, lo2), hi};
}

/// Weights (r1, r2, r3) of the three shifted operators p = 1, 0, -1.
struct ShiftTriple {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

inline ShiftTriple shift_triple(double alpha, double r3) {
    const R3Interval iv = r3_interval(alpha);
    if (!iv.contains(r3)) {
        throw FeasibilityError(r3, iv.lo, iv.hi);
    }
    return {alpha / 2.0 + r3, (2.0 - alpha) / 2.0 - 2.0 * r3, r3};
}

/// Second-order tempered weights omega_j for the left tempered derivative.
///
/// `base` holds l_j = r1 g_j + r2 g_{j-1} + r3 g_{j-2} (no tempering
/// subtraction); `values` holds omega_j, which equals l_j except
/// omega_1 = l_1 - tempering. `tempering` is
/// (r1 e^{lambda h} + r2 + r3 e^{-lambda h}) (1 - e^{-lambda h})^alpha, the
/// discrete counterpart of lambda^alpha h^alpha.
struct TemperedWeightSeq {
    double alpha = 0.0;
    double lambda = 0.0;
    double h = 0.0;
    ShiftTriple triple;
    double tempering = 0.0;
    std::vector<double> base;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }
};

inline TemperedWeightSeq tempered_weights(double alpha, double lambda, double h,
                                          const ShiftTriple& triple, std::size_t n) {
    if (lambda < 0.0) throw ConfigError("lambda", "must be non-negative");
    if (!(h > 0.0)) throw ConfigError("h", "must be positive");

    const GrunwaldSeq g = grunwald_weights(alpha, n);
    TemperedWeightSeq w;
    w.alpha = alpha;
    w.lambda = lambda;
    w.h = h;
    w.triple = triple;
    w.base.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        w.base[j] = triple.r1 * g[j] + triple.r2 * g.at_or_zero(jj - 1) +
                    triple.r3 * g.at_or_zero(jj - 2);
    }
    const double lh = lambda * h;
    w.tempering = (triple.r1 * std::exp(lh) + triple.r2 + triple.r3 * std::exp(-lh)) *
                  std::pow(-std::expm1(-lh), alpha);
    w.values = w.base;
    if (n >= 1) w.values[1] -= w.tempering;
    return w;
}

/// Power-series coefficients of P(z)^power up to z^n, P given by its
/// coefficients (P(0) != 0), via the J.C.P. Miller recurrence.
inline std::vector<double> power_series_pow(std::span<const double> poly, double power,
                                            std::size_t n) {
    if (poly.empty() || poly[0] == 0.0) {
        throw ConfigError("poly", "constant term must be non-zero");
    }
    std::vector<double> q(n + 1, 0.0);
    q[0] = std::pow(poly[0], power);
    const std::size_t deg = poly.size() - 1;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        const std::size_t jmax = std::min(k, deg);
        for (std::size_t j = 1; j <= jmax; ++j) {
            acc += ((power + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * poly[j] *
                   q[k - j];
        }
        q[k] = acc / (static_cast<double>(k) * poly[0]);
    }
    return q;
}

/// Coefficients of sum_{j=1}^{nu} (1/j)(1 - z)^j, the BDF-nu generating polynomial.
inline std::vector<double> bdf_polynomial(int nu) {
    std::vector<double> p(static_cast<std::size_t>(nu) + 1, 0.0);
    for (int j = 1; j <= nu; ++j) {
        // (1 - z)^j = sum_k binom(j, k) (-z)^k
        double binom = 1.0;
        for (int k = 0; k <= j; ++k) {
            p[static_cast<std::size_t>(k)] += (k % 2 == 0 ? 1.0 : -1.0) * binom / j;
            binom = binom * (j - k) / (k + 1);
        }
    }
    return p;
}

/// Time weights l_k of order nu for a fractional derivative of order gamma.
struct TimeWeightSeq {
    int nu = 1;
    double gamma = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
};

inline TimeWeightSeq lubich_time_weights(int nu, double gamma, std::size_t n) {
    if (nu < 1 || nu > 4) throw ConfigError("nu", "supported orders are 1..4");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma", "must lie in (0, 1)");
    if (nu == 1) {
        return {1, gamma, grunwald_weights(gamma, n).values};
    }
    const std::vector<double> poly = bdf_polynomial(nu);
    return {nu, gamma, power_series_pow(poly, gamma, n)};
}

}  // namespace fracfk
