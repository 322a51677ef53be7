#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <new>
#include <vector>

namespace qoct::fft {

namespace detail {

// The FFTW planner is not reentrant; execution of distinct plans is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(std::size_t n, int sign) : n_(n) {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        if (!in_ || !out_) {
            release();
            throw std::bad_alloc();
        }
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, sign, FFTW_ESTIMATE);
    }
    ~Plan() { release(); }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    std::vector<std::complex<double>> run(const std::vector<std::complex<double>>& x) {
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = x[i].real();
            in_[i][1] = x[i].imag();
        }
        fftw_execute(plan_);
        std::vector<std::complex<double>> y(n_);
        for (std::size_t i = 0; i < n_; ++i) y[i] = {out_[i][0], out_[i][1]};
        return y;
    }

private:
    void release() {
        std::lock_guard lock(planner_mutex());
        if (plan_) fftw_destroy_plan(plan_);
        if (in_) fftw_free(in_);
        if (out_) fftw_free(out_);
        plan_ = nullptr;
        in_ = out_ = nullptr;
    }

    std::size_t n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

} // namespace detail

/// X_k = sum_n x_n exp(-2 pi i k n / N), unnormalized.
inline std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x) {
    if (x.empty()) return {};
    detail::Plan plan(x.size(), FFTW_FORWARD);
    return plan.run(x);
}

/// x_n = (1/N) sum_k X_k exp(+2 pi i k n / N).
inline std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& X) {
    if (X.empty()) return {};
    detail::Plan plan(X.size(), FFTW_BACKWARD);
    auto x = plan.run(X);
    const double scale = 1.0 / static_cast<double>(X.size());
    for (auto& v : x) v *= scale;
    return x;
}

} // namespace qoct::fft
