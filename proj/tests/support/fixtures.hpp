#pragma once

#include <random>

#include "fbands/multitaper.hpp"

namespace fbands::testing {

inline FunctionalTimeSeries gaussian_series(int T, int R, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    RowMatrix X(T, R);
    for (int t = 0; t < T; ++t)
        for (int r = 0; r < R; ++r) X(t, r) = normal(gen);
    return FunctionalTimeSeries(X, FunctionalTimeSeries::uniform_grid(R));
}

/// Empty kernels for hand-built estimates; TB fixes the grid, NB = TB/2 - 1.
inline SpectralEstimate empty_estimate(int B, int TB, int R, int K = 1) {
    const BlockPlan plan(B * TB, B);
    const FrequencyGrid grid(TB);
    return {KernelArray(B, grid.size(), R), plan, grid, K};
}

inline DemeanedSpectrum empty_demeaned(int B, int TB, int R, int K = 1) {
    auto S = empty_estimate(B, TB, R, K);
    return {std::move(S.kernels), S.plan, S.grid, S.tapers};
}

/// Fills every kernel with random Hermitian PSD matrices of rank <= 2.
inline void fill_random_psd(KernelArray& a, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    const int R = a.grid_size();
    for (int b = 0; b < a.blocks(); ++b)
        for (int k = 1; k <= a.frequencies(); ++k) {
            KernelMatrix m = KernelMatrix::Zero(R, R);
            for (int rank = 0; rank < 2; ++rank) {
                Eigen::VectorXcd d(R);
                for (int i = 0; i < R; ++i) d(i) = cd(normal(gen), normal(gen));
                m += d * d.adjoint();
            }
            a.at(b, k) = m;
        }
}

/// Fills every kernel with arbitrary complex entries.
inline void fill_random(KernelArray& a, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    for (int b = 0; b < a.blocks(); ++b)
        for (int k = 1; k <= a.frequencies(); ++k) {
            auto m = a.at(b, k);
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) m(i, j) = cd(normal(gen), normal(gen));
        }
}

}  // namespace fbands::testing
