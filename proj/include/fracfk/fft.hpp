#pragma once

// Thin RAII layer over FFTW for complex-to-complex transforms of a fixed size.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <type_traits>

#include "fracfk/error.hpp"

namespace fracfk {

using cplx = std::complex<double>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDestroy {
    void operator()(fftw_plan p) const noexcept {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};

}  // namespace detail

/// FFTW-aligned complex buffer.
class FftBuffer {
public:
    explicit FftBuffer(std::size_t n)
        : n_(n), data_(static_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * (n ? n : 1)))) {
        if (!data_) throw NumericError("fftw_malloc failed");
        std::fill(data_.get(), data_.get() + n_, cplx{});
    }

    std::size_t size() const noexcept { return n_; }
    cplx* data() noexcept { return data_.get(); }
    const cplx* data() const noexcept { return data_.get(); }
    cplx& operator[](std::size_t i) noexcept { return data_.get()[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return data_.get()[i]; }
    std::span<cplx> span() noexcept { return {data_.get(), n_}; }

private:
    std::size_t n_;
    std::unique_ptr<cplx, detail::FftwFree> data_;
};

/// Forward (e^{-2 pi i jk/n}) and backward (e^{+2 pi i jk/n}, unnormalised)
/// transforms of length n. Execution is reentrant: each call supplies its own
/// aligned buffers through FFTW's new-array interface.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        FftBuffer in(n), out(n);
        std::lock_guard lock(detail::fftw_planner_mutex());
        auto* pin = reinterpret_cast<fftw_complex*>(in.data());
        auto* pout = reinterpret_cast<fftw_complex*>(out.data());
        const int len = static_cast<int>(n);
        forward_.reset(fftw_plan_dft_1d(len, pin, pout, FFTW_FORWARD, FFTW_ESTIMATE));
        backward_.reset(fftw_plan_dft_1d(len, pin, pout, FFTW_BACKWARD, FFTW_ESTIMATE));
        if (!forward_ || !backward_) throw NumericError("FFTW planning failed");
    }

    std::size_t size() const noexcept { return n_; }

    void forward(FftBuffer& in, FftBuffer& out) const { run(forward_.get(), in, out); }
    void backward(FftBuffer& in, FftBuffer& out) const { run(backward_.get(), in, out); }

private:
    void run(fftw_plan p, FftBuffer& in, FftBuffer& out) const {
        if (in.size() != n_ || out.size() != n_) throw NumericError("FFT buffer size mismatch");
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }

    std::size_t n_;
    std::unique_ptr<std::remove_pointer_t<fftw_plan>, detail::PlanDestroy> forward_;
    std::unique_ptr<std::remove_pointer_t<fftw_plan>, detail::PlanDestroy> backward_;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace fracfk
