#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fbands {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A functional time series observed on a fixed grid: row t holds X_t(tau_1..tau_R).
class FunctionalTimeSeries {
public:
    FunctionalTimeSeries(RowMatrix values, std::vector<double> grid,
                         std::optional<double> sample_rate_hz = std::nullopt);

    /// Grid of R equally spaced points in [0,1] (single point sits at 0.5).
    static std::vector<double> uniform_grid(int R);

    int length() const { return static_cast<int>(values_.rows()); }
    int grid_size() const { return static_cast<int>(values_.cols()); }
    const RowMatrix& values() const { return values_; }
    const std::vector<double>& grid() const { return grid_; }
    std::optional<double> sample_rate_hz() const { return sample_rate_hz_; }

private:
    RowMatrix values_;
    std::vector<double> grid_;
    std::optional<double> sample_rate_hz_;
};

/// B equal non-overlapping temporal blocks. Trailing samples that do not fill a
/// block are dropped and reported through truncated().
class BlockPlan {
public:
    BlockPlan(int T, int B);

    int total_length() const { return T_; }
    int blocks() const { return B_; }
    int block_length() const { return TB_; }
    int effective_length() const { return B_ * TB_; }
    int truncated() const { return T_ - effective_length(); }

    /// Midpoint u_b = (b + 1/2)/B of block b (0-based).
    double midpoint(int b) const { return (b + 0.5) / B_; }
    std::vector<double> midpoints() const;

    /// First time index (0-based) of block b.
    int block_start(int b) const { return b * TB_; }

private:
    int T_;
    int B_;
    int TB_;
};

inline BlockPlan make_block_plan(int T, int B) { return BlockPlan(T, B); }

/// Interior Fourier frequencies omega_k = k / T_B for k = 1..N_B, N_B = floor(T_B/2) - 1.
/// Fourier indices are 1-based throughout the library to match omega_k.
class FrequencyGrid {
public:
    explicit FrequencyGrid(int block_length);

    int block_length() const { return TB_; }
    int size() const { return NB_; }
    double omega(int k) const { return static_cast<double>(k) / TB_; }
    double step() const { return 1.0 / TB_; }
    std::vector<double> frequencies() const;

    /// Smallest k with omega_k >= w (may exceed size()).
    int index_at_or_above(double w) const;

private:
    int TB_;
    int NB_;
};

inline FrequencyGrid fourier_grid(int block_length) { return FrequencyGrid(block_length); }

/// Indices of n approximately equally spaced points among R grid points,
/// always including both ends when n >= 2.
std::vector<int> equally_spaced_indices(int R, int n);

}  // namespace fbands
