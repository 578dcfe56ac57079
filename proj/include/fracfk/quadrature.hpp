#pragma once

// Reference Riemann-Liouville derivatives of smooth functions:
//  * Jacobi-Gauss-Lobatto quadrature of the weakly singular kernel, for
//    functions vanishing with their first derivative at the base point;
//  * truncated power series for (x-a)^m e^{c (x-a)}.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/error.hpp"

namespace fracfk {

/// Gauss-Lobatto nodes and weights on [-1, 1] for the weight (1-z)^aw (1+z)^bw.
struct JacobiGLRule {
    double aw = 0.0;
    double bw = 0.0;
    std::vector<double> nodes;    ///< ascending, nodes.front() == -1, nodes.back() == 1
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// Monic three-term recurrence p_{k+1} = (z - a_k) p_k - b_k p_{k-1} for Jacobi polynomials.
inline double jacobi_a(std::size_t k, double al, double be) {
    const double s = al + be;
    if (k == 0) return (be - al) / (s + 2.0);
    const double t = 2.0 * static_cast<double>(k) + s;
    return (be * be - al * al) / (t * (t + 2.0));
}

inline double jacobi_b(std::size_t k, double al, double be) {
    const double s = al + be;
    const auto kk = static_cast<double>(k);
    if (k == 1) return 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    const double t = 2.0 * kk + s;
    return 4.0 * kk * (kk + al) * (kk + be) * (kk + s) / (t * t * (t + 1.0) * (t - 1.0));
}

}  // namespace detail

/// Golub's Lobatto modification of the Jacobi matrix, followed by a symmetric
/// eigensolve (Golub-Welsch).
inline JacobiGLRule jacobi_gl(double aw, double bw, std::size_t n) {
    if (!(aw > -1.0) || !(bw > -1.0)) throw ConfigError("jacobi exponents", "must exceed -1");
    if (n < 3) throw ConfigError("n", "Gauss-Lobatto rule needs at least 3 nodes");

    const std::size_t m = n - 1;  // index of the modified last row
    // Evaluate monic p_{m-1}, p_m at z = +1 and -1... here p_{m} means degree m.
    auto eval = [&](double z, double& pm, double& pm1) {
        double prev = 1.0;                          // p_0
        double cur = z - detail::jacobi_a(0, aw, bw);  // p_1
        for (std::size_t k = 1; k < m; ++k) {
            const double next = (z - detail::jacobi_a(k, aw, bw)) * cur -
                                detail::jacobi_b(k, aw, bw) * prev;
            prev = cur;
            cur = next;
        }
        pm = cur;    // degree m
        pm1 = prev;  // degree m-1
    };
    double pp, pp1, pm, pm1;
    eval(1.0, pp, pp1);
    eval(-1.0, pm, pm1);
    // [pp pp1; pm pm1] [a; b] = [pp; -pm]
    const double det = pp * pm1 - pp1 * pm;
    const double a_mod = (pp * pm1 + pp1 * pm) / det;
    const double b_mod = (-pp * pm - pm * pp) / det;

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t k = 0; k < m; ++k) {
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = detail::jacobi_a(k, aw, bw);
    }
    J(N - 1, N - 1) = a_mod;
    for (std::size_t k = 1; k < m; ++k) {
        const double off = std::sqrt(detail::jacobi_b(k, aw, bw));
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = off;
        J(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = off;
    }
    if (!(b_mod > 0.0)) throw NumericError("Lobatto modification produced a non-positive coefficient");
    J(N - 1, N - 2) = J(N - 2, N - 1) = std::sqrt(b_mod);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw NumericError("JacobiGL eigensolve failed");

    const double mu0 = std::pow(2.0, aw + bw + 1.0) * std::tgamma(aw + 1.0) *
                       std::tgamma(bw + 1.0) / std::tgamma(aw + bw + 2.0);
    JacobiGLRule rule;
    rule.aw = aw;
    rule.bw = bw;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }
    rule.nodes.front() = -1.0;
    rule.nodes.back() = 1.0;
    return rule;
}

/// Number of Lobatto nodes used by the fractional-derivative rule.
inline constexpr std::size_t kDefaultFracNodes = 20;

/// Left Riemann-Liouville derivative of order alpha in (1, 2) at x > a for G
/// with G(a) = G'(a) = 0, from samples of G''.
template <class F>
auto left_rl_derivative(F&& g_xx, double alpha, double a, double x,
                        std::size_t nodes = kDefaultFracNodes) {
    if (!(x > a)) throw ConfigError("x", "must lie strictly right of the base point");
    if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError("alpha", "must lie in (1, 2)");
    const JacobiGLRule rule = jacobi_gl(1.0 - alpha, 0.0, nodes);
    const double half = (x - a) / 2.0;
    const double mid = (x + a) / 2.0;
    decltype(g_xx(x)) acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) acc += g_xx(half * rule.nodes[i] + mid) * rule.weights[i];
    return acc * (std::pow(half, 2.0 - alpha) / std::tgamma(2.0 - alpha));
}

/// Right Riemann-Liouville derivative at x < b for G with G(b) = G'(b) = 0.
template <class F>
auto right_rl_derivative(F&& g_xx, double alpha, double b, double x,
                         std::size_t nodes = kDefaultFracNodes) {
    if (!(x < b)) throw ConfigError("x", "must lie strictly left of the base point");
    if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError("alpha", "must lie in (1, 2)");
    const JacobiGLRule rule = jacobi_gl(0.0, 1.0 - alpha, nodes);
    const double half = (b - x) / 2.0;
    const double mid = (b + x) / 2.0;
    decltype(g_xx(x)) acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) acc += g_xx(half * rule.nodes[i] + mid) * rule.weights[i];
    return acc * (std::pow(half, 2.0 - alpha) / std::tgamma(2.0 - alpha));
}

/// Same rule with a prebuilt Lobatto rule, for hot loops. The interval
/// [lo, hi] is mapped so that z = -1 -> lo and z = 1 -> hi; the rule's weight
/// exponents decide which end carries the kernel singularity.
template <class F>
auto rl_derivative_with(const JacobiGLRule& rule, F&& g_xx, double alpha, double lo, double hi) {
    const double half = (hi - lo) / 2.0;
    const double mid = (hi + lo) / 2.0;
    decltype(g_xx(hi)) acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) acc += g_xx(half * rule.nodes[i] + mid) * rule.weights[i];
    return acc * (std::pow(half, 2.0 - alpha) / std::tgamma(2.0 - alpha));
}

enum class Side { Left, Right };

/// Number of terms kept beyond the leading one in the exponential-polynomial series.
inline constexpr std::size_t kSeriesTerms = 50;

/// Riemann-Liouville derivative of (x-a)^m e^{c (x-a)} (Side::Left, distance
/// d = x - a) or of (b-x)^m e^{c (b-x)} (Side::Right, d = b - x). Both reduce
/// to sum_n c^n / n! Gamma(n+m+1) / Gamma(n+m+1-alpha) d^{n+m-alpha}.
template <class Rate>
Rate series_exp_poly_deriv(int m, Rate rate, double alpha, double distance,
                           std::size_t terms = kSeriesTerms) {
    if (m < 0) throw ConfigError("m", "monomial degree must be non-negative");
    if (!(distance > 0.0)) throw ConfigError("distance", "must be positive");
    const double md = m;
    Rate b = Rate(std::tgamma(md + 1.0) / std::tgamma(md + 1.0 - alpha));
    const double logd = std::log(distance);
    Rate acc = b * std::exp((md - alpha) * logd);
    Rate dpow = Rate(std::exp((md - alpha) * logd));
    for (std::size_t k = 1; k <= terms; ++k) {
        const double kd = static_cast<double>(k);
        b *= rate * ((md + kd) / (kd * (md + kd - alpha)));
        dpow *= distance;
        acc += b * dpow;
    }
    return acc;
}

/// Coefficient b_{m,k} of the series above, for inspection and tail bounds.
inline double series_coefficient(int m, double rate, double alpha, std::size_t k) {
    const double md = m;
    double b = std::tgamma(md + 1.0) / std::tgamma(md + 1.0 - alpha);
    for (std::size_t j = 1; j <= k; ++j) {
        const double jd = static_cast<double>(j);
        b *= rate * (md + jd) / (jd * (md + jd - alpha));
    }
    return b;
}

}  // namespace fracfk
