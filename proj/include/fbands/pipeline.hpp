#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbands/inchworm.hpp"
#include "fbands/stationarity.hpp"

namespace fbands {

struct AnalysisConfig {
    int B = 10;
    std::optional<int> tapers;  // overrides bandwidth when set
    double bandwidth = 0.05;
    double alpha = 0.05;
    int n_max = 30;
    int d0 = 100000;
    int r_test = 4;
    std::uint64_t seed = 1;
    bool block_diagonal = true;
    int decimation = 1;
    bool antialias = false;
    bool center = false;
    NullModel null_model{};
    int threads = 1;  // not serialized: results never depend on it

    void validate() const;
    bool operator==(const AnalysisConfig&) const = default;
};

struct InputSummary {
    std::string source;
    int raw_rows = 0;
    int T = 0;
    int R = 0;
    int effective_T = 0;
    int truncated = 0;
    int decimation = 1;
    std::optional<double> sample_rate_hz;
    std::vector<double> grid;
    std::vector<std::string> notes;

    bool operator==(const InputSummary&) const = default;
};

struct AnalysisReport {
    static constexpr int schema_version = 1;

    AnalysisConfig config;
    InputSummary input;
    int block_length = 0;  // T_B
    int frequencies = 0;   // N_B
    int tapers = 0;        // K
    std::vector<int> test_grid;
    BandPartition partition;
    SearchTrace trace;
    std::vector<StationarityResult> stationarity;
    std::map<std::string, double> timings;  // seconds per stage; empty unless requested

    bool operator==(const AnalysisReport&) const = default;
};

/// Pipeline stages, used to attribute failures.
enum class Stage { Config, Ingest, Spectrum, Search, Stationarity, Report };
std::string stage_name(Stage s);

/// Multitaper estimate, demeaning, inchworm search, and per-band stationarity tests.
/// Errors are rethrown with the failing stage prefixed to the message.
AnalysisReport analyze(const FunctionalTimeSeries& X, const AnalysisConfig& config, InputSummary input = {},
                       bool record_timings = false);

/// Band edges [lo, hi) of each estimated band, the first starting at 0 and the last ending at 0.5.
std::vector<std::pair<double, double>> band_edges(const BandPartition& p);

/// Least-squares cubic spline (equally spaced interior knots in u) fitted to the
/// band-averaged diagonal of g for every grid point.
struct SmoothedBand {
    double omega1 = 0.0;
    double omega2 = 0.0;
    Eigen::VectorXd u;          // block midpoints
    Eigen::MatrixXd observed;   // R x B band-averaged Re g(tau_i, tau_i)
    Eigen::MatrixXd design;     // B x (knots + 4) basis at the midpoints
    Eigen::MatrixXd coefficients;  // R x (knots + 4)
    Eigen::MatrixXd fitted;     // R x B

    /// Fitted curve of grid point i at arbitrary u in [0, 1].
    Eigen::VectorXd evaluate(int i, const std::vector<double>& at) const;
    int knots = 4;
};

SmoothedBand smooth_band_g(const DemeanedSpectrum& G, double omega1, double omega2, int knots = 4);

}  // namespace fbands
