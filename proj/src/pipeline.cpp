#include "fbands/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/QR>

#include "fbands/error.hpp"
#include "fbands/multitaper.hpp"
#include "fbands/random.hpp"
#include "fbands/simgen.hpp"

namespace fbands {

void AnalysisConfig::validate() const {
    if (B < 2) throw config_error("B must be >= 2");
    if (tapers && *tapers < 1) throw config_error("taper count must be >= 1");
    if (!tapers && !(bandwidth > 0.0 && bandwidth < 0.5)) throw config_error("bandwidth must lie in (0, 0.5)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    if (n_max < 1) throw config_error("n_max must be >= 1");
    if (d0 < 1000) throw config_error("d0 must be >= 1000");
    if (r_test < 2) throw config_error("R_test must be >= 2");
    if (decimation < 1) throw config_error("decimation factor must be >= 1");
    if (threads < 0) throw config_error("thread count must be >= 0");
}

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::Config: return "config";
        case Stage::Ingest: return "ingest";
        case Stage::Spectrum: return "spectrum";
        case Stage::Search: return "search";
        case Stage::Stationarity: return "stationarity";
        case Stage::Report: return "report";
    }
    return "unknown";
}

namespace {

template <class Fn>
auto staged(Stage stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), stage_name(stage) + ": " + e.what());
    } catch (const std::bad_alloc&) {
        throw numeric_error(stage_name(stage) + ": out of memory");
    }
}

}  // namespace

std::vector<std::pair<double, double>> band_edges(const BandPartition& p) {
    std::vector<std::pair<double, double>> edges;
    double lo = 0.0;
    for (double c : p.cuts) {
        edges.emplace_back(lo, c);
        lo = c;
    }
    edges.emplace_back(lo, 0.5);
    return edges;
}

AnalysisReport analyze(const FunctionalTimeSeries& X, const AnalysisConfig& config, InputSummary input,
                       bool record_timings) {
    staged(Stage::Config, [&] { config.validate(); return 0; });
    using clock = std::chrono::steady_clock;
    AnalysisReport report;
    report.config = config;
    auto tick = clock::now();
    auto lap = [&](const char* name) {
        const auto now = clock::now();
        if (record_timings) report.timings[name] = std::chrono::duration<double>(now - tick).count();
        tick = now;
    };

    const BlockPlan plan = staged(Stage::Spectrum, [&] { return BlockPlan(X.length(), config.B); });
    input.T = X.length();
    input.R = X.grid_size();
    input.effective_T = plan.effective_length();
    input.truncated = plan.truncated();
    input.grid = X.grid();
    if (!input.sample_rate_hz) input.sample_rate_hz = X.sample_rate_hz();
    if (plan.truncated() > 0)
        input.notes.push_back("dropped " + std::to_string(plan.truncated()) + " trailing samples to fill " +
                              std::to_string(config.B) + " equal blocks");
    report.input = std::move(input);

    const auto [S, G] = staged(Stage::Spectrum, [&] {
        const int K = config.tapers ? *config.tapers : tapers_for_bandwidth(config.bandwidth, plan.block_length());
        MultitaperOptions mt;
        SpectralEstimate S = multitaper_spectrum(X, plan, K, mt);
        DemeanedSpectrum G = demean_spectrum(S);
        return std::pair{std::move(S), std::move(G)};
    });
    report.block_length = plan.block_length();
    report.frequencies = S.grid.size();
    report.tapers = S.tapers;
    if (config.r_test > X.grid_size())
        throw config_error(stage_name(Stage::Search) + ": R_test=" + std::to_string(config.r_test) +
                           " exceeds the observed grid size " + std::to_string(X.grid_size()));
    report.test_grid = equally_spaced_indices(X.grid_size(), config.r_test);
    lap("spectrum");

    const InchwormResult search = staged(Stage::Search, [&] {
        InchwormOptions o;
        o.alpha = config.alpha;
        o.n_max = config.n_max;
        o.d0 = config.d0;
        o.test_grid = report.test_grid;
        o.seed = stream_key(config.seed, {1});
        o.block_diagonal = config.block_diagonal;
        o.null_model = config.null_model;
        o.threads = config.threads;
        return inchworm_search(G, S, o);
    });
    report.partition = search.partition;
    report.trace = search.trace;
    lap("search");

    staged(Stage::Stationarity, [&] {
        const auto edges = band_edges(report.partition);
        for (std::size_t p = 0; p < edges.size(); ++p) {
            if (band_indices(G.grid, edges[p].first, edges[p].second).empty()) continue;
            StationarityOptions o;
            o.d0 = config.d0;
            o.test_grid = report.test_grid;
            o.alpha = config.alpha;
            o.seed = stream_key(config.seed, {2, p});
            o.null_model = config.null_model;
            o.threads = config.threads;
            report.stationarity.push_back(stationarity_test(G, S, edges[p].first, edges[p].second, o));
        }
        return 0;
    });
    lap("stationarity");
    return report;
}

Eigen::VectorXd SmoothedBand::evaluate(int i, const std::vector<double>& at) const {
    return bspline_basis(at, knots + 4) * coefficients.row(i).transpose();
}

SmoothedBand smooth_band_g(const DemeanedSpectrum& G, double omega1, double omega2, int knots) {
    if (knots < 1) throw config_error("spline needs at least one interior knot");
    const int B = G.kernels.blocks();
    const int nb = knots + 4;
    if (B < nb)
        throw config_error("spline with " + std::to_string(knots) + " interior knots needs B >= " + std::to_string(nb));
    const auto idx = band_indices(G.grid, omega1, omega2);
    if (idx.empty()) throw config_error("band contains no Fourier frequency");
    const int R = G.kernels.grid_size();

    SmoothedBand out;
    out.omega1 = omega1;
    out.omega2 = omega2;
    out.knots = knots;
    const auto mids = G.plan.midpoints();
    out.u = Eigen::Map<const Eigen::VectorXd>(mids.data(), B);
    out.observed.resize(R, B);
    for (int b = 0; b < B; ++b)
        for (int i = 0; i < R; ++i) {
            double s = 0.0;
            for (int k : idx) s += G.kernels(b, k, i, i).real();
            out.observed(i, b) = s / static_cast<double>(idx.size());
        }
    out.design = bspline_basis(mids, nb);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(out.design);
    if (qr.rank() < nb) throw numeric_error("underdetermined spline fit: design rank " + std::to_string(qr.rank()));
    out.coefficients = qr.solve(out.observed.transpose()).transpose();
    out.fitted = out.coefficients * out.design.transpose();
    return out;
}

}  // namespace fbands
