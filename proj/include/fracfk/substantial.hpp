#pragma once

// Time weights of the substantial derivative, d_{i,k} = e^{J rho U_i k tau} l_k,
// and the history part of the marching right-hand side.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracfk/coeffs.hpp"
#include "fracfk/error.hpp"
#include "fracfk/onesided.hpp"
#include "fracfk/toeplitz.hpp"

namespace fracfk {

inline constexpr cplx kJ{0.0, 1.0};

struct SubstantialWeights {
    TimeWeightSeq l;
    double rho = 0.0;
    std::vector<double> U_values;  ///< U(x_i), i = 0..M
    double tau = 0.0;

    /// Phase angle theta_i = rho U_i tau.
    double theta(std::size_t i) const { return rho * U_values[i] * tau; }
    std::size_t levels() const noexcept { return l.size(); }
};

inline SubstantialWeights make_substantial_weights(TimeWeightSeq l, double rho,
                                                   std::vector<double> U_values, double tau) {
    if (!(tau > 0.0)) throw ConfigError("tau", "must be positive");
    return {std::move(l), rho, std::move(U_values), tau};
}

inline cplx substantial_weight(std::size_t i, std::size_t k, const SubstantialWeights& w) {
    if (k >= w.l.size()) throw ConfigError("k", "level beyond the generated time weights");
    return std::polar(1.0, w.theta(i) * static_cast<double>(k)) * w.l[k];
}

/// Full time history G^0, G^1, ... on nodes 0..M.
class HistoryBuffer {
public:
    HistoryBuffer() = default;
    HistoryBuffer(std::size_t nodes, std::size_t capacity) : nodes_(nodes) { levels_.reserve(capacity); }

    void push(CVector level) {
        if (level.size() != nodes_) throw ConfigError("level", "node count mismatch");
        levels_.push_back(std::move(level));
    }
    std::size_t size() const noexcept { return levels_.size(); }
    std::size_t nodes() const noexcept { return nodes_; }
    const CVector& operator[](std::size_t n) const { return levels_.at(n); }
    CVector& operator[](std::size_t n) { return levels_.at(n); }
    void truncate(std::size_t n) { levels_.resize(n); }

private:
    std::size_t nodes_ = 0;
    std::vector<CVector> levels_;
};

/// sum_{k<n} d_{i,k} e^{J theta_i (n-k)} G_i^0 - sum_{k=1}^{n-1} d_{i,k} G_i^{n-k}.
inline cplx history_rhs(std::size_t n, std::size_t i, const SubstantialWeights& w,
                        const HistoryBuffer& hist) {
    if (n < 1) throw ConfigError("n", "history needs n >= 1");
    if (hist.size() < n) throw ConfigError("hist", "levels 0..n-1 required");
    const double th = w.theta(i);
    double lsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) lsum += w.l[k];
    cplx acc = std::polar(1.0, th * static_cast<double>(n)) * lsum * hist[0][i];
    for (std::size_t k = 1; k < n; ++k) acc -= substantial_weight(i, k, w) * hist[n - k][i];
    return acc;
}

/// tau^q times the nu-th order approximation of (d/dt - J rho U_i)^q G at t = 0,
/// i.e. sum_p b_p^{q, -J theta_i} G_i^p (no 1/tau^q scaling).
inline cplx scaled_substantial_deriv_at_zero(int q, int nu, std::span<const cplx> early, double theta) {
    const OneSidedStencil st = onesided_coeffs(q, nu, cplx(0.0, -theta), StencilSide::Left);
    if (early.size() < st.coeffs.size()) {
        throw ConfigError("levels", "q + nu - 1 exceeds the available time levels");
    }
    cplx acc{};
    for (std::size_t p = 0; p < st.coeffs.size(); ++p) acc += st.coeffs[p] * early[p];
    return acc;
}

/// (d/dt - J rho U_i)^q G |_{t=0} from G_i^0 .. G_i^{q+nu-1}.
inline cplx substantial_time_deriv_at_zero(int q, int nu, std::span<const cplx> early, double rho,
                                           double U_i, double tau) {
    return scaled_substantial_deriv_at_zero(q, nu, early, rho * U_i * tau) / std::pow(tau, q);
}

/// c_{n,q} = sum_{k<n} l_k (n-k)^q / q! - n^{q-gamma} / Gamma(q+1-gamma): the
/// coefficient multiplying tau^q D_q G(0) in the initial-correction term.
inline double initial_correction_coeff(const TimeWeightSeq& l, std::size_t n, int q) {
    const double nd = static_cast<double>(n);
    const double fq = std::tgamma(q + 1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += l[k] * std::pow(nd - static_cast<double>(k), q) / fq;
    return s - std::pow(nd, q - l.gamma) / std::tgamma(q + 1.0 - l.gamma);
}

}  // namespace fracfk
