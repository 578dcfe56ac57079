// fracfk: command-line front end.
//
//   fracfk converge --preset table1 --alpha 1.8 --gamma 0.3
//   fracfk solve --example 3 --grid 64:32 --corrected --m1 2 -o sol.csv
//   fracfk pdf -o pdf.csv --threads 4
//   fracfk selftest
//
// Every option may also come from a key=value file given with --config;
// command-line values win. Exit status: 0 ok, 1 bad configuration,
// 2 numerical failure, 3 self-test failure.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fracfk/fracfk.hpp"

using namespace fracfk;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kSelfTest = 3 };

struct RunConfig {
    std::string preset;
    std::optional<int> example;
    std::optional<double> alpha, gamma, lambda, K, rho, T;
    std::optional<int> nu, m1, m2;
    std::optional<std::string> r3;
    bool corrected = false;
    bool bootstrap = false;
    std::vector<std::string> grids;
    std::optional<double> mg_tol, krylov_tol;
    std::string output;
    bool gnuplot = false;
    // pdf
    int rho_min = -39, rho_max = 40;
    std::optional<std::size_t> M, N;
    double a_param = 0.001, x0 = 0.5, u_lo = 0.25, u_hi = 0.75;
    bool u_zero = false;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    // selftest
    bool inject_fault = false;
};

/// Scientific notation with 7 significant digits, independent of the C locale.
std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 6);
    return std::string(buf, res.ptr);
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw ConfigError("output", "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool is_file() const { return file_.is_open(); }

private:
    std::string path_;
    std::ofstream file_;
};

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
    const auto colon = s.find(':');
    auto to_size = [&](const std::string& part) {
        std::size_t v = 0;
        const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size() || v == 0)
            throw ConfigError("grid", "expected M:N with positive integers, got '" + s + "'");
        return v;
    };
    if (colon == std::string::npos) throw ConfigError("grid", "expected M:N, got '" + s + "'");
    return {to_size(s.substr(0, colon)), to_size(s.substr(colon + 1))};
}

double parse_r3(const std::string& s, double alpha) {
    if (s == "zero") return 0.0;
    if (s == "upper-half") return r3_half_upper(alpha);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("r3", "expected a number, 'zero' or 'upper-half', got '" + s + "'");
    return v;
}

/// Study from the preset (if any) with every explicitly given option applied on top.
Study build_study(const RunConfig& rc) {
    Study st;
    if (!rc.preset.empty()) {
        const bool fourth = rc.preset == "table3";
        const double a0 = fourth ? 1.5 : 1.3, g0 = fourth ? 0.5 : 0.8;
        st = preset_study(rc.preset, rc.alpha.value_or(a0), rc.gamma.value_or(g0), rc.lambda.value_or(0.2));
    } else {
        st.params.alpha = rc.alpha.value_or(1.5);
        st.params.gamma = rc.gamma.value_or(0.5);
    }
    if (rc.example) st.example = *rc.example;
    if (rc.alpha) st.params.alpha = *rc.alpha;
    if (rc.gamma) st.params.gamma = *rc.gamma;
    if (rc.lambda) st.params.lambda = *rc.lambda;
    if (rc.K) st.params.K = *rc.K;
    if (rc.rho) st.params.rho = *rc.rho;
    if (rc.nu) st.scheme.nu = *rc.nu;
    if (rc.m1) st.scheme.m1 = *rc.m1;
    if (rc.m2) st.scheme.m2 = *rc.m2;
    if (rc.r3) st.scheme.r3 = parse_r3(*rc.r3, st.params.alpha);
    if (rc.corrected) st.scheme.corrected = true;
    if (rc.bootstrap) st.scheme.start = StartMode::Bootstrap;
    if (rc.mg_tol) st.scheme.mg.tol = *rc.mg_tol;
    if (rc.krylov_tol) st.scheme.krylov.tol = *rc.krylov_tol;
    if (!rc.grids.empty()) {
        st.grids.clear();
        for (const auto& g : rc.grids) st.grids.push_back(parse_grid(g));
    }
    if (st.grids.empty()) throw ConfigError("grid", "no grid given (use --grid M:N or --preset)");
    // validate before any work
    const ManufacturedProblem mp(st.example, st.params);
    for (const auto& [M, N] : st.grids) {
        SchemeConfig c = st.scheme;
        c.M = M;
        c.N = N;
        validate(manufactured_spec(mp), c);
    }
    return st;
}

void write_gnuplot(const RunConfig& rc, const std::string& body) {
    if (!rc.gnuplot) return;
    if (rc.output.empty() || rc.output == "-") throw ConfigError("gnuplot", "needs --output to reference a CSV file");
    const std::string path = rc.output + ".gp";
    std::ofstream gp(path);
    if (!gp) throw ConfigError("gnuplot", "cannot write '" + path + "'");
    gp << "set datafile separator ','\n" << body;
}

int cmd_converge(const RunConfig& rc) {
    const Study st = build_study(rc);
    Output out(rc.output);
    std::ostream& os = out.stream();
    os << "M,N,error,rate,iterations,seconds\n";
    for (const StudyRow& r : run_study(st))
        os << r.M << ',' << r.N << ',' << num(r.error) << ',' << num(r.rate) << ',' << num(r.iterations) << ','
           << num(r.seconds) << '\n';
    write_gnuplot(rc, "set logscale xy\nset xlabel 'M'\nset ylabel 'max error'\nplot '" + rc.output +
                          "' using 1:3 skip 1 with linespoints title 'error'\n");
    return kOk;
}

int cmd_solve(const RunConfig& rc) {
    Study st = build_study(rc);
    if (st.grids.size() != 1) throw ConfigError("grid", "solve takes exactly one M:N pair");
    const ManufacturedProblem mp(st.example, st.params);
    const ProblemSpec p = manufactured_spec(mp);
    SchemeConfig c = st.scheme;
    c.M = st.grids.front().first;
    c.N = st.grids.front().second;
    const Solution s = run(p, c);
    Output out(rc.output);
    std::ostream& os = out.stream();
    os << "x,re,im,exact_re,exact_im,abs_error\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const cplx e = mp.exact(s.x[i], p.T);
        os << num(s.x[i]) << ',' << num(s.final[i].real()) << ',' << num(s.final[i].imag()) << ',' << num(e.real()) << ','
           << num(e.imag()) << ',' << num(std::abs(s.final[i] - e)) << '\n';
    }
    const ErrorNorms en = error_norms(s, [&](double x) { return mp.exact(x, p.T); });
    std::fprintf(stderr, "max error %.6e, l2 error %.6e, mean iterations %.2f, %.3fs%s\n", en.linf, en.l2,
                 s.mean_iterations(), s.seconds, s.any_fallback() ? " (dense fallback used)" : "");
    write_gnuplot(rc, "set xlabel 'x'\nplot '" + rc.output + "' using 1:2 skip 1 with lines title 'Re G', '" + rc.output +
                          "' using 1:4 skip 1 with points title 'exact'\n");
    return kOk;
}

int cmd_pdf(const RunConfig& rc) {
    PdfConfig cfg;
    if (rc.alpha) cfg.alpha = *rc.alpha;
    if (rc.gamma) cfg.gamma = *rc.gamma;
    if (rc.lambda) cfg.lambda = *rc.lambda;
    if (rc.K) cfg.K = *rc.K;
    if (rc.T) cfg.T = *rc.T;
    if (rc.nu) cfg.scheme.nu = *rc.nu;
    if (rc.m2) cfg.scheme.m2 = *rc.m2;
    if (rc.m1) cfg.scheme.m1 = *rc.m1;
    if (rc.r3) cfg.scheme.r3 = parse_r3(*rc.r3, cfg.alpha);
    if (rc.M) cfg.scheme.M = *rc.M;
    if (rc.N) cfg.scheme.N = *rc.N;
    if (rc.mg_tol) cfg.scheme.mg.tol = *rc.mg_tol;
    cfg.a_param = rc.a_param;
    cfg.x0 = rc.x0;
    cfg.u_lo = rc.u_lo;
    cfg.u_hi = rc.u_hi;
    cfg.u_zero = rc.u_zero;
    if (rc.rho_max < rc.rho_min) throw ConfigError("rho-max", "must not be below rho-min");
    cfg.grid = {rc.rho_min, rc.rho_max};
    {
        ProblemSpec p;
        p.alpha = cfg.alpha;
        p.gamma = cfg.gamma;
        p.lambda = cfg.lambda;
        p.K = cfg.K;
        p.T = cfg.T;
        validate(p, cfg.scheme);
        (void)gaussian_delta(cfg.a_param, 0.0, cfg.x0);
    }
    const std::string path = rc.output.empty() ? "pdf.csv" : rc.output;
    if (path == "-") throw ConfigError("output", "pdf writes two files; give a file name");
    const std::string amp_path = path.substr(0, path.rfind(".csv")) + "_amplitude.csv";
    Output out(path), amp(amp_path);

    const PdfResult r = simulate_pdf(cfg, rc.threads);
    std::ostream& os = out.stream();
    os << "x,A,re,im\n";
    for (std::size_t ix = 0; ix < r.pdf.x.size(); ++ix)
        for (std::size_t m = 0; m < r.pdf.A.size(); ++m)
            os << num(r.pdf.x[ix]) << ',' << num(r.pdf.A[m]) << ',' << num(r.pdf.values[ix][m].real()) << ','
               << num(r.pdf.values[ix][m].imag()) << '\n';
    std::ostream& as = amp.stream();
    as << "x,rho,abs\n";
    for (std::size_t ix = 0; ix < r.pdf.x.size(); ++ix)
        for (std::size_t j = 0; j < cfg.grid.size(); ++j)
            as << num(r.pdf.x[ix]) << ',' << num(cfg.grid.rho(j)) << ',' << num(std::abs(r.samples[j][ix])) << '\n';
    std::fprintf(stderr, "%zu solves, mean iterations %.2f; max |Re| %.6e, max |Im| %.6e; wrote %s and %s\n",
                 cfg.grid.size(), r.mean_iterations, r.pdf.max_abs_real(), r.pdf.max_abs_imag(), path.c_str(),
                 amp_path.c_str());
    RunConfig g = rc;
    g.output = path;
    write_gnuplot(g, "set xlabel 'A'\nset ylabel 'x'\nset view map\nsplot '" + path + "' using 2:1:3 skip 1 with points palette pt 5\n");
    return kOk;
}

int cmd_selftest(const RunConfig& rc) {
    SelfCheckOptions o;
    o.flip_omega1 = rc.inject_fault;
    bool ok = true;
    for (const CheckResult& r : run_self_checks(o)) {
        std::printf("%-4s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.pass;
    }
    return ok ? kOk : kSelfTest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for the backward fractional Feynman-Kac equation with tempered Levy flights"};
    app.set_config("--config", "", "key=value file with option defaults");
    app.require_subcommand(1);
    RunConfig rc;

    auto* converge = app.add_subcommand("converge", "refinement study on a manufactured example");
    auto* solve = app.add_subcommand("solve", "single solve on a manufactured example");
    auto* pdf = app.add_subcommand("pdf", "occupation-time density simulation");
    auto* selftest = app.add_subcommand("selftest", "run the invariant checks");
    for (auto* sub : {converge, solve, pdf, selftest}) sub->fallthrough();

    app.add_option("--preset", rc.preset, "table1, table2, table3 or table4")->check(CLI::IsMember({"table1", "table2", "table3", "table4"}));
    app.add_option("--example", rc.example, "manufactured example 1, 2 or 3");
    app.add_option("--alpha", rc.alpha, "space order in (1, 2)");
    app.add_option("--gamma", rc.gamma, "time order in (0, 1)");
    app.add_option("--lambda", rc.lambda, "tempering parameter >= 0");
    app.add_option("--K", rc.K, "diffusion coefficient > 0");
    app.add_option("--rho", rc.rho, "Fourier variable of the functional");
    app.add_option("--T", rc.T, "final time (pdf)");
    app.add_option("--nu", rc.nu, "time order of the convolution weights, 1..4");
    app.add_option("--m1", rc.m1, "initial corrections, 0..2");
    app.add_option("--m2", rc.m2, "boundary corrections, nu-1..2");
    app.add_option("--r3", rc.r3, "shift weight: number, 'zero' or 'upper-half'");
    app.add_flag("--corrected", rc.corrected, "use the boundary-corrected space operator");
    app.add_flag("--bootstrap", rc.bootstrap, "obtain start levels from the uncorrected scheme");
    app.add_option("--grid", rc.grids, "grid level M:N (repeatable or comma separated)")->delimiter(',');
    app.add_option("--M", rc.M, "space intervals (pdf)");
    app.add_option("--N", rc.N, "time steps (pdf)");
    app.add_option("--mg-tol", rc.mg_tol, "multigrid relative residual tolerance");
    app.add_option("--krylov-tol", rc.krylov_tol, "FGMRES relative residual tolerance");
    app.add_option("-o,--output", rc.output, "CSV output file ('-' or empty: stdout)");
    app.add_flag("--gnuplot", rc.gnuplot, "also write <output>.gp plotting the CSV");
    app.add_option("--rho-min", rc.rho_min, "smallest rho sample (pdf)");
    app.add_option("--rho-max", rc.rho_max, "largest rho sample (pdf)");
    app.add_option("--a-param", rc.a_param, "width of the Gaussian start (pdf)");
    app.add_option("--x0", rc.x0, "centre of the Gaussian start (pdf)");
    app.add_option("--u-lo", rc.u_lo, "U = 1 on (u-lo, u-hi) (pdf)");
    app.add_option("--u-hi", rc.u_hi, "U = 1 on (u-lo, u-hi) (pdf)");
    app.add_flag("--u-zero", rc.u_zero, "U = 0 everywhere (pdf)");
    app.add_option("--threads", rc.threads, "worker threads for the rho solves (pdf)")->check(CLI::PositiveNumber);
    app.add_flag("--inject-fault", rc.inject_fault, "negate omega_1 before the checks (selftest)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kConfig;
    }

    try {
        if (*converge) return cmd_converge(rc);
        if (*solve) return cmd_solve(rc);
        if (*pdf) return cmd_pdf(rc);
        return cmd_selftest(rc);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumeric;
    }
}
