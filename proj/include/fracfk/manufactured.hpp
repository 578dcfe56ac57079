#pragma once

// Manufactured solutions G(x, t) = e^{J rho x t} p(t) Phi(x) on (0, 1) with U(x) = x,
// and the forcing that makes them exact:
//   f = e^{J rho x t} Phi(x) (C D^gamma p)(t)
//     + K kappa_alpha p(t) [ e^{-lambda x} D_L^alpha(e^{(lambda + J rho t) x} Phi)
//                          + e^{lambda x} D_R^alpha(e^{(-lambda + J rho t) x} Phi)
//                          - 2 lambda^alpha e^{J rho x t} Phi(x) ].
//
// Example 1: p = t^{3+gamma} + 1,               Phi = sin(x^2) sin((1-x)^2), T = 1.
// Example 2: p = t^{3+gamma} + t^3 + t^2 + t + 1, same Phi,                    T = 1/2.
// Example 3: same p, Phi = x^4 - 2x^3 - x^2 + 2x + 1 (nonzero at both ends),   T = 1/2.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "fracfk/error.hpp"
#include "fracfk/quadrature.hpp"
#include "fracfk/space_operator.hpp"

namespace fracfk {

struct ExampleParams {
    double alpha = 1.5;
    double gamma = 0.5;
    double lambda = 0.2;
    double K = 1.0;
    double rho = 1.0;
};

/// Sum of c t^beta terms with beta >= 0.
struct TimePoly {
    std::vector<std::pair<double, double>> terms;  ///< (coefficient, power)

    double operator()(double t) const {
        double s = 0.0;
        for (const auto& [c, b] : terms) s += c * (b == 0.0 ? 1.0 : std::pow(t, b));
        return s;
    }
    /// Caputo derivative of order gamma in (0, 1).
    double caputo(double t, double gamma) const {
        double s = 0.0;
        for (const auto& [c, b] : terms) {
            if (b == 0.0) continue;
            s += c * std::tgamma(b + 1.0) / std::tgamma(b + 1.0 - gamma) * std::pow(t, b - gamma);
        }
        return s;
    }
};

/// Coefficients of P(base + y) in powers of y, for P given in ascending powers of x.
inline std::vector<double> shift_polynomial(const std::vector<double>& p, double base) {
    std::vector<double> c = p;
    const std::size_t n = c.size();
    // repeated synthetic division (Taylor shift)
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = n - 1; j > k; --j) c[j - 1] += base * c[j];
    return c;
}

class ManufacturedProblem {
public:
    ManufacturedProblem(int id, ExampleParams prm, std::size_t frac_nodes = kDefaultFracNodes)
        : id_(id), prm_(prm) {
        if (id < 1 || id > 3) throw ConfigError("example", "must be 1, 2 or 3");
        if (!(prm.alpha > 1.0 && prm.alpha < 2.0)) throw ConfigError("alpha", "must lie in (1, 2)");
        if (!(prm.gamma > 0.0 && prm.gamma < 1.0)) throw ConfigError("gamma", "must lie in (0, 1)");
        if (prm.lambda < 0.0) throw ConfigError("lambda", "must be non-negative");
        const double g = prm.gamma;
        p_.terms = {{1.0, 3.0 + g}, {1.0, 0.0}};
        if (id > 1) p_.terms = {{1.0, 3.0 + g}, {1.0, 3.0}, {1.0, 2.0}, {1.0, 1.0}, {1.0, 0.0}};
        horizon_ = id == 1 ? 1.0 : 0.5;
        kappa_alpha_ = riesz_kappa(prm.alpha);
        if (id < 3) {
            left_rule_ = jacobi_gl(1.0 - prm.alpha, 0.0, frac_nodes);
            right_rule_ = jacobi_gl(0.0, 1.0 - prm.alpha, frac_nodes);
        }
        poly_ = {1.0, 2.0, -1.0, -2.0, 1.0};
        poly_right_ = shift_polynomial(poly_, b_);
        for (std::size_t m = 1; m < poly_right_.size(); m += 2) poly_right_[m] = -poly_right_[m];
    }

    int id() const noexcept { return id_; }
    const ExampleParams& params() const noexcept { return prm_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double horizon() const noexcept { return horizon_; }
    const TimePoly& time_factor() const noexcept { return p_; }
    double U(double x) const noexcept { return x; }

    double phi(double x) const {
        if (id_ < 3) return std::sin(x * x) * std::sin((1.0 - x) * (1.0 - x));
        double s = 0.0, xp = 1.0;
        for (double c : poly_) {
            s += c * xp;
            xp *= x;
        }
        return s;
    }

    cplx exact(double x, double t) const { return std::polar(1.0, prm_.rho * x * t) * p_(t) * phi(x); }
    cplx initial(double x) const { return exact(x, 0.0); }
    cplx bc_a(double t) const { return exact(a_, t); }
    cplx bc_b(double t) const { return exact(b_, t); }

    cplx forcing(double x, double t) const {
        const double lam = prm_.lambda;
        const cplx phase = std::polar(1.0, prm_.rho * x * t);
        const double ph = phi(x);
        const cplx time_part = phase * ph * p_.caputo(t, prm_.gamma);
        const cplx cl(lam, prm_.rho * t);
        const cplx cr(-lam, prm_.rho * t);
        cplx left, right;
        if (id_ < 3) {
            left = std::exp(-lam * x) *
                   rl_derivative_with(left_rule_, [&](double s) { return sin_product_dd(cl, s); }, prm_.alpha, a_, x);
            right = std::exp(lam * x) *
                    rl_derivative_with(right_rule_, [&](double s) { return sin_product_dd(cr, s); }, prm_.alpha, x, b_);
        } else {
            // e^{c x} P(x) = e^{c a} sum_m P_m (x-a)^m e^{c (x-a)}   (a = 0)
            cplx sl{};
            for (std::size_t m = 0; m < poly_.size(); ++m)
                sl += poly_[m] * series_exp_poly_deriv<cplx>(static_cast<int>(m), cl, prm_.alpha, x - a_);
            left = std::exp(-lam * x) * std::exp(cl * a_) * sl;
            // e^{c x} P(x) = e^{c b} sum_m Q_m (b-x)^m e^{-c (b-x)}
            cplx sr{};
            for (std::size_t m = 0; m < poly_right_.size(); ++m)
                sr += poly_right_[m] * series_exp_poly_deriv<cplx>(static_cast<int>(m), -cr, prm_.alpha, b_ - x);
            right = std::exp(lam * x) * std::exp(cr * b_) * sr;
        }
        const double lam_a = lam == 0.0 ? 0.0 : std::pow(lam, prm_.alpha);
        const cplx space = prm_.K * kappa_alpha_ * p_(t) * (left + right - 2.0 * lam_a * phase * ph);
        return time_part + space;
    }

private:
    /// Second derivative of e^{c s} sin(s^2) sin((1-s)^2).
    static cplx sin_product_dd(cplx c, double s) {
        const double r = 1.0 - s;
        const double u = std::sin(s * s), du = 2.0 * s * std::cos(s * s);
        const double ddu = 2.0 * std::cos(s * s) - 4.0 * s * s * u;
        const double v = std::sin(r * r), dv = -2.0 * r * std::cos(r * r);
        const double ddv = 2.0 * std::cos(r * r) - 4.0 * r * r * v;
        const double S = u * v, dS = du * v + u * dv, ddS = ddu * v + 2.0 * du * dv + u * ddv;
        return std::exp(c * s) * (c * c * S + 2.0 * c * dS + ddS);
    }

    int id_;
    ExampleParams prm_;
    double a_ = 0.0;
    double b_ = 1.0;
    double horizon_ = 1.0;
    double kappa_alpha_ = 0.0;
    TimePoly p_;
    JacobiGLRule left_rule_;
    JacobiGLRule right_rule_;
    std::vector<double> poly_;
    std::vector<double> poly_right_;  ///< P in powers of (b - x)
};

}  // namespace fracfk
