#pragma once

// One-sided boundary stencils for (d/dx + sigma)^q at x_0, accurate to order nu:
//   (d/dx + sigma)^q G(x_0) ~ h^{-q} sum_p b_p G(x_p).
// The right-boundary variant (-1)^q (d/dx - sigma)^q G(x_M) uses the same
// coefficients applied to x_M, x_{M-1}, ... .

#include <complex>
#include <vector>

#include "fracfk/error.hpp"

namespace fracfk {

enum class StencilSide { Left, Right };

struct OneSidedStencil {
    int q = 0;
    int nu = 1;
    std::complex<double> sigma_h;
    StencilSide side = StencilSide::Left;
    std::vector<std::complex<double>> coeffs;  ///< index p counts from the boundary node inward
};

inline OneSidedStencil onesided_coeffs(int q, int nu, std::complex<double> s, StencilSide side) {
    using C = std::complex<double>;
    if (nu < 1 || nu > 4) throw ConfigError("nu", "one-sided stencils exist for nu = 1..4");
    OneSidedStencil st{q, nu, s, side, {}};
    const C s2 = s * s;
    switch (q) {
        case 0:
            st.coeffs = {C(1.0)};
            break;
        case 1:
            switch (nu) {
                case 1: st.coeffs = {-1.0 + s, C(1.0)}; break;
                case 2: st.coeffs = {-1.5 + s, C(2.0), C(-0.5)}; break;
                case 3: st.coeffs = {-11.0 / 6.0 + s, C(3.0), C(-1.5), C(1.0 / 3.0)}; break;
                default: st.coeffs = {-25.0 / 12.0 + s, C(4.0), C(-3.0), C(4.0 / 3.0), C(-0.25)}; break;
            }
            break;
        case 2:
            switch (nu) {
                case 1: st.coeffs = {1.0 - 2.0 * s + s2, -2.0 + 2.0 * s, C(1.0)}; break;
                case 2: st.coeffs = {2.0 - 3.0 * s + s2, -5.0 + 4.0 * s, 4.0 - s, C(-1.0)}; break;
                case 3:
                    st.coeffs = {35.0 / 12.0 - 11.0 / 3.0 * s + s2, -26.0 / 3.0 + 6.0 * s, 9.5 - 3.0 * s,
                                 -14.0 / 3.0 + 2.0 / 3.0 * s, C(11.0 / 12.0)};
                    break;
                default:
                    st.coeffs = {15.0 / 4.0 - 25.0 / 6.0 * s + s2, -77.0 / 6.0 + 8.0 * s,
                                 107.0 / 6.0 - 6.0 * s, -13.0 + 8.0 / 3.0 * s, 61.0 / 12.0 - 0.5 * s,
                                 C(-5.0 / 6.0)};
                    break;
            }
            break;
        default:
            throw ConfigError("q", "one-sided stencils are tabulated for q = 0, 1, 2");
    }
    return st;
}

}  // namespace fracfk
