#pragma once

// Real Toeplitz matrices with O(n log n) products via circulant embedding.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracfk/error.hpp"
#include "fracfk/fft.hpp"

namespace fracfk {

using CVector = std::vector<cplx>;

/// n x n real Toeplitz matrix T(i, j) = t(i - j), stored by its first column
/// t(0..n-1) and first row t(0, -1, ..., -(n-1)).
class ToeplitzCore {
public:
    ToeplitzCore() = default;

    ToeplitzCore(std::vector<double> first_col, std::vector<double> first_row)
        : col_(std::move(first_col)), row_(std::move(first_row)) {
        if (col_.empty() || col_.size() != row_.size()) {
            throw ConfigError("toeplitz", "first column and row must be non-empty and equal length");
        }
        if (col_[0] != row_[0]) {
            throw ConfigError("toeplitz", "first column and row disagree on the diagonal");
        }
        build_symbol();
    }

    std::size_t size() const noexcept { return col_.size(); }
    const std::vector<double>& first_col() const noexcept { return col_; }
    const std::vector<double>& first_row() const noexcept { return row_; }

    /// Entry with offset d = i - j.
    double offset(std::ptrdiff_t d) const {
        return d >= 0 ? col_[static_cast<std::size_t>(d)] : row_[static_cast<std::size_t>(-d)];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return offset(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
    }
    double diagonal() const noexcept { return col_[0]; }

    ToeplitzCore transposed() const { return ToeplitzCore(row_, col_); }

    Eigen::MatrixXd dense() const {
        const auto n = static_cast<Eigen::Index>(size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = (*this)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        return m;
    }

    /// y = T x through a circulant embedding of power-of-two length >= 2n.
    void matvec(std::span<const cplx> x, std::span<cplx> y) const {
        const std::size_t n = size();
        if (x.size() != n || y.size() != n) throw ConfigError("x", "length must equal matrix size");
        const std::size_t len = plan_->size();
        FftBuffer buf(len), spec(len);
        for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
        plan_->forward(buf, spec);
        for (std::size_t k = 0; k < len; ++k) spec[k] *= symbol_[k];
        plan_->backward(spec, buf);
        const double scale = 1.0 / static_cast<double>(len);
        for (std::size_t i = 0; i < n; ++i) y[i] = buf[i] * scale;
    }

    CVector matvec(std::span<const cplx> x) const {
        CVector y(size());
        matvec(x, y);
        return y;
    }

    /// Straightforward O(n^2) product, used for small sizes and as a reference.
    void matvec_direct(std::span<const cplx> x, std::span<cplx> y) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (std::size_t j = 0; j < n; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
    }

private:
    void build_symbol() {
        const std::size_t n = col_.size();
        const std::size_t len = next_pow2(2 * n);
        plan_ = std::make_shared<const FftPlan>(len);
        FftBuffer c(len), out(len);
        for (std::size_t i = 0; i < n; ++i) c[i] = col_[i];
        for (std::size_t k = 1; k < n; ++k) c[len - k] = row_[k];
        plan_->forward(c, out);
        symbol_.assign(out.data(), out.data() + len);
    }

    std::vector<double> col_;
    std::vector<double> row_;
    std::shared_ptr<const FftPlan> plan_;
    std::vector<cplx> symbol_;
};

}  // namespace fracfk
