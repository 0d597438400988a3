#pragma once

#include <complex>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

namespace fbands::detail {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// Out-of-place complex DFT of fixed length n with owned aligned buffers.
class ComplexFft {
public:
    ComplexFft(int n, int sign) : n_(n) {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(n, in_, out_, sign, FFTW_ESTIMATE);
    }
    ComplexFft(const ComplexFft&) = delete;
    ComplexFft& operator=(const ComplexFft&) = delete;
    ~ComplexFft() {
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }

    int size() const { return n_; }

    std::span<std::complex<double>> input() {
        return {reinterpret_cast<std::complex<double>*>(in_), static_cast<std::size_t>(n_)};
    }
    std::span<const std::complex<double>> output() const {
        return {reinterpret_cast<const std::complex<double>*>(out_), static_cast<std::size_t>(n_)};
    }

    void execute() { fftw_execute(plan_); }

private:
    int n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

}  // namespace fbands::detail
