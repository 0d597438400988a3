// Command-line front end: simulate, analyze, evaluate.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbands/csv.hpp"
#include "fbands/error.hpp"
#include "fbands/multitaper.hpp"
#include "fbands/pipeline.hpp"
#include "fbands/plot.hpp"
#include "fbands/report.hpp"
#include "fbands/simgen.hpp"

namespace {

using namespace fbands;

enum Exit : int { kOk = 0, kInternal = 1, kParse = 2, kConfig = 3, kNumeric = 4, kIo = 5 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return kParse;
        case ErrorKind::Config: return kConfig;
        case ErrorKind::Numeric: return kNumeric;
        case ErrorKind::Io: return kIo;
    }
    return kInternal;
}

std::vector<double> parse_cuts(const std::string& text) {
    std::vector<double> cuts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            cuts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw config_error("invalid cut frequency '" + item + "'");
        }
    }
    return cuts;
}

struct SimulateArgs {
    std::string setting = "white-noise";
    int T = 2000;
    int R = 5;
    std::uint64_t seed = 1;
    std::string out;
};

struct AnalyzeArgs {
    std::string in;
    std::string out = "report.json";
    AnalysisConfig config;
    std::optional<double> bandwidth;
    std::optional<double> sample_rate;
    bool full_covariance = false;
    bool timings = false;
    std::string coupling = "taper-overlap";
    std::string form = "complex";
    std::string variant = "printed";
    std::string plot;
    std::string plot_ghat;
};

struct EvaluateArgs {
    std::string report;
    std::string truth;
    std::string setting;
};

void run_simulate(const SimulateArgs& a) {
    const auto X = simulate_fts(parse_setting(a.setting), a.T, a.R, a.seed);
    write_csv(a.out, X);
    std::cout << "wrote " << X.length() << "x" << X.grid_size() << " series to " << a.out << "\n";
}

void run_analyze(AnalyzeArgs a) {
    AnalysisConfig& c = a.config;
    if (a.bandwidth) c.bandwidth = *a.bandwidth;
    c.block_diagonal = !a.full_covariance;
    c.null_model.coupling = parse_coupling(a.coupling);
    c.null_model.form = parse_form(a.form);
    c.null_model.variant = parse_variant(a.variant);
    c.validate();

    IngestOptions io;
    io.decimation = c.decimation;
    io.antialias = c.antialias;
    io.center = c.center;
    io.sample_rate_hz = a.sample_rate;
    IngestResult data = [&] {
        try {
            return ingest_csv(a.in, io);
        } catch (const Error& e) {
            throw Error(e.kind(), "ingest: " + std::string(e.what()));
        }
    }();

    InputSummary summary;
    summary.source = a.in;
    summary.raw_rows = data.raw_rows;
    summary.decimation = c.decimation;
    summary.notes = data.notes;
    const AnalysisReport report = analyze(data.series, c, summary, a.timings);
    write_report(a.out, report);

    if (!a.plot.empty() || !a.plot_ghat.empty()) {
        const BlockPlan plan(data.series.length(), c.B);
        const SpectralEstimate S = multitaper_spectrum(data.series, plan, report.tapers);
        const auto rate = report.input.sample_rate_hz;
        if (!a.plot.empty()) write_text(a.plot, autospectrum_svg(S, report.partition, rate));
        if (!a.plot_ghat.empty()) {
            const DemeanedSpectrum G = demean_spectrum(S);
            std::vector<SmoothedBand> bands;
            for (const auto& [lo, hi] : band_edges(report.partition))
                if (!band_indices(G.grid, lo, hi).empty()) bands.push_back(smooth_band_g(G, lo, hi));
            write_text(a.plot_ghat, smoothed_g_svg(bands, rate));
        }
    }

    std::cout << "bands: " << report.partition.bands() << "\ncuts:";
    for (double cut : report.partition.cuts) std::cout << " " << cut;
    std::cout << "\nreport: " << a.out << "\n";
}

void run_evaluate(const EvaluateArgs& a) {
    const AnalysisReport report = read_report(a.report);
    BandPartition truth;
    if (!a.setting.empty()) truth = true_partition(parse_setting(a.setting));
    else truth.cuts = parse_cuts(a.truth);
    const FrequencyGrid grid(report.block_length);
    nlohmann::ordered_json out;
    out["bands"] = report.partition.bands();
    out["cuts"] = report.partition.cuts;
    out["true_bands"] = truth.bands();
    out["true_cuts"] = truth.cuts;
    out["frequencies"] = grid.size();
    out["rand_index"] = rand_index(report.partition, truth, grid);
    std::cout << out.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive frequency band estimation for nonstationary functional time series"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Write a synthetic series as CSV");
    simulate->add_option("--setting", sim.setting, "white-noise, linear or sinusoidal")->capture_default_str();
    simulate->add_option("--T", sim.T, "Series length (even)")->capture_default_str();
    simulate->add_option("--R", sim.R, "Functional grid size")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out,-o", sim.out, "Output CSV path")->required();

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Estimate frequency bands and test stationarity");
    analyze_cmd->add_option("input", an.in, "Input CSV (rows = time)")->required();
    analyze_cmd->add_option("--out,-o", an.out, "Report JSON path")->capture_default_str();
    analyze_cmd->add_option("--B", an.config.B, "Number of time blocks")->capture_default_str();
    auto* bw = analyze_cmd->add_option("--bw", an.bandwidth, "Multitaper bandwidth (default 0.05)");
    analyze_cmd->add_option("--tapers", an.config.tapers, "Number of sine tapers")->excludes(bw);
    analyze_cmd->add_option("--alpha", an.config.alpha, "Family-wise error level")->capture_default_str();
    analyze_cmd->add_option("--nmax", an.config.n_max, "Frequencies tested per pass")->capture_default_str();
    analyze_cmd->add_option("--d0", an.config.d0, "Null draws per test")->capture_default_str();
    analyze_cmd->add_option("--rtest", an.config.r_test, "Grid points used for testing")->capture_default_str();
    analyze_cmd->add_option("--seed", an.config.seed, "Master seed")->capture_default_str();
    analyze_cmd->add_option("--decimate", an.config.decimation, "Keep every d-th row")->capture_default_str();
    analyze_cmd->add_flag("--antialias", an.config.antialias, "Average each run of d rows when decimating");
    analyze_cmd->add_flag("--center", an.config.center, "Remove column means");
    analyze_cmd->add_flag("--full-covariance", an.full_covariance, "Simulate blocks jointly");
    analyze_cmd->add_option("--sample-rate", an.sample_rate, "Sampling rate of the input in Hz");
    analyze_cmd->add_option("--threads", an.config.threads, "Worker threads (0 = all cores)")->capture_default_str();
    analyze_cmd->add_flag("--timings", an.timings, "Record stage timings in the report");
    analyze_cmd->add_option("--coupling", an.coupling, "taper-overlap, diagonal or verbatim")->capture_default_str();
    analyze_cmd->add_option("--form", an.form, "complex or real-part")->capture_default_str();
    analyze_cmd->add_option("--variant", an.variant, "printed or symmetric")->capture_default_str();
    analyze_cmd->add_option("--plot", an.plot, "SVG path for log autospectra with band cuts");
    analyze_cmd->add_option("--plot-ghat", an.plot_ghat, "SVG path for smoothed band-specific g");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Compare a report against known cuts");
    evaluate->add_option("report", ev.report, "Report JSON")->required();
    auto* truth = evaluate->add_option("--truth", ev.truth, "Comma-separated true cut frequencies");
    evaluate->add_option("--setting", ev.setting, "Use a simulation setting's true cuts")->excludes(truth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*simulate) run_simulate(sim);
        else if (*analyze_cmd) run_analyze(an);
        else if (*evaluate) run_evaluate(ev);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
