#pragma once

// Refinement studies on the manufactured examples, plus the four standard
// study layouts used by the command-line tool and the acceptance driver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fracfk/error.hpp"
#include "fracfk/manufactured.hpp"
#include "fracfk/solver.hpp"

namespace fracfk {

struct Study {
    int example = 1;
    ExampleParams params;
    SchemeConfig scheme;
    std::vector<std::pair<std::size_t, std::size_t>> grids;  ///< (M, N) per refinement level
};

struct StudyRow {
    std::size_t M = 0;
    std::size_t N = 0;
    double error = 0.0;  ///< max-norm error at the horizon
    double rate = NAN;   ///< log2 of the error ratio to the previous row
    double iterations = 0.0;
    int min_iterations = 0;
    int max_iterations = 0;
    bool fallback = false;
    double seconds = 0.0;
};

inline ProblemSpec manufactured_spec(const ManufacturedProblem& mp) {
    const ExampleParams& e = mp.params();
    ProblemSpec p;
    p.alpha = e.alpha;
    p.gamma = e.gamma;
    p.lambda = e.lambda;
    p.K = e.K;
    p.rho = e.rho;
    p.a = mp.a();
    p.b = mp.b();
    p.T = mp.horizon();
    p.U = [&mp](double x) { return mp.U(x); };
    p.G0 = [&mp](double x) { return mp.initial(x); };
    p.BCa = [&mp](double t) { return mp.bc_a(t); };
    p.BCb = [&mp](double t) { return mp.bc_b(t); };
    p.f = [&mp](double x, double t) { return mp.forcing(x, t); };
    return p;
}

inline std::vector<StudyRow> run_study(const Study& st) {
    const ManufacturedProblem mp(st.example, st.params);
    const ProblemSpec p = manufactured_spec(mp);
    std::vector<StudyRow> rows;
    for (const auto& [M, N] : st.grids) {
        SchemeConfig c = st.scheme;
        c.M = M;
        c.N = N;
        const Solution s = run(p, c);
        StudyRow r;
        r.M = M;
        r.N = N;
        r.error = error_norms(s, [&](double x) { return mp.exact(x, p.T); }).linf;
        if (!rows.empty()) r.rate = std::log2(rows.back().error / r.error);
        r.iterations = s.mean_iterations();
        r.min_iterations = s.reports.empty() ? 0 : s.reports.front().iterations;
        r.max_iterations = r.min_iterations;
        for (const auto& rep : s.reports) {
            r.min_iterations = std::min(r.min_iterations, rep.iterations);
            r.max_iterations = std::max(r.max_iterations, rep.iterations);
        }
        r.fallback = s.any_fallback();
        r.seconds = s.seconds;
        rows.push_back(r);
    }
    return rows;
}

/// Second-order scheme, homogeneous data, N = M = 2^4..2^7.
inline Study table1_study(double alpha, double gamma) {
    Study s;
    s.example = 1;
    s.params = {alpha, gamma, 0.2, 1.0, 1.0};
    s.scheme.nu = 2;
    s.scheme.r3 = 0.0;
    for (std::size_t M = 16; M <= 128; M *= 2) s.grids.emplace_back(M, M);
    return s;
}

inline double r3_half_upper(double alpha) {
    return (alpha - 1.0) * (2.0 - alpha) * (alpha + 3.0) / (4.0 * (alpha + 1.0) * (alpha + 2.0));
}

/// First-order scheme, lambda = 0.7, r3 at half its upper bound.
inline Study table2_study(double alpha, double gamma) {
    Study s = table1_study(alpha, gamma);
    s.params.lambda = 0.7;
    s.scheme.nu = 1;
    s.scheme.r3 = r3_half_upper(alpha);
    return s;
}

/// Fourth-order time stepping with two initial corrections, h = tau^2, T = 1/2.
inline Study table3_study(double alpha, double gamma) {
    Study s;
    s.example = 2;
    s.params = {alpha, gamma, 0.2, 1.0, 1.0};
    s.scheme.nu = 4;
    s.scheme.m1 = 2;
    s.scheme.r3 = 0.0;
    for (std::size_t k = 10; k <= 80; k *= 2) s.grids.emplace_back(k * k, k / 2);
    return s;
}

/// Nonhomogeneous boundary and initial data, corrected operator, h = tau, T = 1/2.
inline Study table4_study(double alpha, double gamma, double lambda) {
    Study s;
    s.example = 3;
    s.params = {alpha, gamma, lambda, 1.0, 1.0};
    s.scheme.nu = 2;
    s.scheme.m1 = 2;
    s.scheme.m2 = 1;
    s.scheme.corrected = true;
    s.scheme.r3 = 0.0;
    for (std::size_t k = 20; k <= 160; k *= 2) s.grids.emplace_back(k, k / 2);
    return s;
}

/// Study by preset name ("table1".."table4") for one parameter column.
inline Study preset_study(const std::string& name, double alpha, double gamma, double lambda) {
    if (name == "table1") return table1_study(alpha, gamma);
    if (name == "table2") return table2_study(alpha, gamma);
    if (name == "table3") return table3_study(alpha, gamma);
    if (name == "table4") return table4_study(alpha, gamma, lambda);
    throw ConfigError("preset", "unknown preset '" + name + "' (expected table1..table4)");
}

}  // namespace fracfk
