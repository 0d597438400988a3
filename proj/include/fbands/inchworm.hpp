#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbands/nullsim.hpp"
#include "fbands/scan.hpp"

namespace fbands {

/// Ordered cut frequencies; band p covers [cut_{p-1}, cut_p).
struct BandPartition {
    std::vector<double> cuts;

    int bands() const { return static_cast<int>(cuts.size()) + 1; }
    bool operator==(const BandPartition&) const = default;
};

/// Hochberg step-up: with sorted p_(1) <= ... <= p_(m), rejects the k smallest
/// where k = max{i : p_(i) <= alpha / (m - i + 1)}. Returns original indices, ascending.
std::vector<int> hochberg(const std::vector<double>& pvalues, double alpha);

/// One pass of the search at a fixed start frequency.
struct SearchPass {
    int start_index = 0;            // k*, omega0 = k* / T_B
    double omega0 = 0.0;
    std::vector<int> widths;        // tested delta_k = k / T_B, stored as k
    std::vector<double> targets;    // omega0 + delta_k
    std::vector<double> statistics;
    std::vector<double> pvalues;
    std::vector<int> rejected;      // positions into widths
    std::string action;             // "cut" or "advance"
    double cut = 0.0;               // valid when action == "cut"

    bool operator==(const SearchPass&) const = default;
};

struct SearchTrace {
    double epsilon = 0.0;
    std::vector<SearchPass> passes;
    std::string stop_reason;

    bool operator==(const SearchTrace&) const = default;
};

struct InchwormOptions {
    double alpha = 0.05;
    int n_max = 30;
    int d0 = 100000;
    std::vector<int> test_grid;  // indices into the observed grid; empty = 4 equally spaced points
    std::uint64_t seed = 1;
    bool block_diagonal = true;
    NullModel null_model{};
    SamplingMethod sampling = SamplingMethod::Spectral;
    int threads = 1;
};

struct InchwormResult {
    BandPartition partition;
    SearchTrace trace;
};

/// Test-grid indices used when none are given: min(4, R) equally spaced points.
std::vector<int> default_test_grid(int grid_size);

/// Batched left-to-right frequency search with Hochberg control per pass.
InchwormResult inchworm_search(const DemeanedSpectrum& G, const SpectralEstimate& S, const InchwormOptions& options);

}  // namespace fbands
