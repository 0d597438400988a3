#pragma once

#include <cstdint>
#include <vector>

#include "fbands/nullsim.hpp"
#include "fbands/scan.hpp"

namespace fbands {

struct StationarityResult {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double Q0 = 0.0;
    double scaled = 0.0;   // K * Q0, compared against draws of (1/B) sum_b ||H_b||^2
    double pvalue = 1.0;
    bool reject = false;
    std::vector<int> null_frequencies;  // Fourier indices used by the null grid

    bool operator==(const StationarityResult&) const = default;
};

/// Fourier indices k with omega1 <= k / T_B < omega2; omega2 = 0.5 admits every
/// index up to N_B.
std::vector<int> band_indices(const FrequencyGrid& grid, double omega1, double omega2);

/// Q0 = (1/B) sum_b (omega2 - omega1) * mean_{omega in band} (1/R^2) sum_{i,j} |g_b(omega)(i,j)|^2.
double stationarity_statistic(const DemeanedSpectrum& G, double omega1, double omega2);

struct StationarityOptions {
    int d0 = 100000;
    std::vector<int> test_grid;  // empty = default test grid
    double alpha = 0.05;
    std::uint64_t seed = 1;
    NullModel null_model{};
    SamplingMethod sampling = SamplingMethod::Spectral;
    int max_null_frequencies = 16;
    int threads = 1;
};

/// Tests g == 0 on [omega1, omega2) with a simulated Gaussian quadratic-form null.
/// The statistic is evaluated on the same test grid as the null.
StationarityResult stationarity_test(const DemeanedSpectrum& G, const SpectralEstimate& S, double omega1,
                                     double omega2, const StationarityOptions& options = {});

}  // namespace fbands
