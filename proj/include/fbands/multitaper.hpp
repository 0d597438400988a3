#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fbands/core.hpp"

namespace fbands {

using cd = std::complex<double>;
using KernelMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using KernelView = Eigen::Map<KernelMatrix>;
using ConstKernelView = Eigen::Map<const KernelMatrix>;

/// Dense B x N_B array of R x R complex kernels. Fourier index k is 1-based.
class KernelArray {
public:
    KernelArray() = default;
    KernelArray(int blocks, int frequencies, int grid_size)
        : B_(blocks), NB_(frequencies), R_(grid_size),
          data_(static_cast<std::size_t>(blocks) * frequencies * grid_size * grid_size) {}

    int blocks() const { return B_; }
    int frequencies() const { return NB_; }
    int grid_size() const { return R_; }

    KernelView at(int b, int k) { return KernelView(data_.data() + offset(b, k), R_, R_); }
    ConstKernelView at(int b, int k) const { return ConstKernelView(data_.data() + offset(b, k), R_, R_); }

    cd operator()(int b, int k, int i, int j) const { return data_[offset(b, k) + static_cast<std::size_t>(i) * R_ + j]; }

    const std::vector<cd>& raw() const { return data_; }

    /// Same kernels restricted to a subset of grid indices.
    KernelArray restrict_to(const std::vector<int>& grid_indices) const;

private:
    std::size_t offset(int b, int k) const {
        return (static_cast<std::size_t>(b) * NB_ + (k - 1)) * static_cast<std::size_t>(R_) * R_;
    }

    int B_ = 0;
    int NB_ = 0;
    int R_ = 0;
    std::vector<cd> data_;
};

/// Local multitaper estimates f^(mt)_{b, omega_k}(tau_i, tau_j).
struct SpectralEstimate {
    KernelArray kernels;
    BlockPlan plan;
    FrequencyGrid grid;
    int tapers;
};

/// Block-demeaned estimates g_{b/B, omega_k}; sums to zero over blocks.
struct DemeanedSpectrum {
    KernelArray kernels;
    BlockPlan plan;
    FrequencyGrid grid;
    int tapers;

    DemeanedSpectrum restrict_to(const std::vector<int>& grid_indices) const {
        return {kernels.restrict_to(grid_indices), plan, grid, tapers};
    }
};

/// T_B x K orthonormal sine tapers; column k-1 holds taper k. The same matrix
/// applies to every block since tapers are defined on block-local time.
RowMatrix sine_taper_matrix(int block_length, int tapers);

/// K = max(1, floor(bw (T_B + 1)) - 1).
int tapers_for_bandwidth(double bandwidth, int block_length);

/// Bandwidth (K + 1) / (T_B + 1) of K sine tapers.
inline double sine_taper_bandwidth(int tapers, int block_length) {
    return static_cast<double>(tapers + 1) / (block_length + 1);
}

/// Tapered functional DFT of block b (0-based) with taper k (1-based) at an
/// arbitrary frequency, using the global time index in the exponential.
Eigen::VectorXcd fdft(const FunctionalTimeSeries& X, const BlockPlan& plan, int block, int taper, int tapers,
                      double omega);

struct MultitaperOptions {
    bool center = false;  // remove each column's mean before tapering
};

SpectralEstimate multitaper_spectrum(const FunctionalTimeSeries& X, const BlockPlan& plan, int tapers,
                                     const MultitaperOptions& options = {});

DemeanedSpectrum demean_spectrum(const SpectralEstimate& S);

/// Spectral-window overlap rho(m) = (1/K) sum_{k,l} |H_{k,l}(m / T_B)|^2 for
/// m = 0..max_lag, with H_{k,l}(w) = sum_t v_k(t) v_l(t) exp(-i 2 pi w t).
/// rho(0) = 1; it is the correlation between multitaper estimates at Fourier
/// frequencies m bins apart for a locally flat spectrum.
std::vector<double> taper_overlap(int block_length, int tapers, int max_lag);

}  // namespace fbands
