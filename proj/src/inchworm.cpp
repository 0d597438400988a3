#include "fbands/inchworm.hpp"

#include <algorithm>
#include <numeric>

#include "fbands/error.hpp"
#include "fbands/random.hpp"

namespace fbands {

std::vector<int> hochberg(const std::vector<double>& pvalues, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    const int m = static_cast<int>(pvalues.size());
    for (double p : pvalues)
        if (!(p >= 0.0 && p <= 1.0)) throw config_error("p-values must lie in [0, 1]");
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pvalues[a] < pvalues[b]; });
    int keep = 0;
    for (int i = m; i >= 1; --i) {
        if (pvalues[order[i - 1]] <= alpha / (m - i + 1)) {
            keep = i;
            break;
        }
    }
    std::vector<int> rejected(order.begin(), order.begin() + keep);
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

std::vector<int> default_test_grid(int grid_size) { return equally_spaced_indices(grid_size, std::min(4, grid_size)); }

namespace {

// floor(a / b) for b > 0 and any sign of a.
long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

InchwormResult inchworm_search(const DemeanedSpectrum& G, const SpectralEstimate& S, const InchwormOptions& options) {
    if (G.kernels.blocks() < 2) throw config_error("inchworm search needs B >= 2");
    if (options.n_max < 1) throw config_error("n_max must be >= 1");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");

    const long TB = G.grid.block_length();
    const long NB = G.grid.size();
    const long K = G.tapers;
    const std::vector<int> test_grid =
        options.test_grid.empty() ? default_test_grid(G.kernels.grid_size()) : options.test_grid;

    // epsilon = (K+1)/(T_B+1); k_min = ceil(T_B epsilon) in exact integer arithmetic.
    const long k_min = (TB * (K + 1) + TB) / (TB + 1);
    const auto k_max_bound = [&](long k_star) {
        // floor(N_B - k* - T_B epsilon)
        return floor_div((NB - k_star) * (TB + 1) - TB * (K + 1), TB + 1);
    };
    const auto past_end = [&](long k_star) {
        // omega0 > omega_{N_B} - 2 epsilon
        return k_star * (TB + 1) > NB * (TB + 1) - 2 * TB * (K + 1);
    };

    InchwormResult result;
    result.trace.epsilon = static_cast<double>(K + 1) / static_cast<double>(TB + 1);

    const DemeanedSpectrum G_test = G.restrict_to(test_grid);
    const KernelCovarianceTerms terms(S, test_grid, options.null_model);
    NullSimOptions sim;
    sim.method = options.sampling;
    sim.threads = options.threads;

    long k_star = k_min;
    for (int pass = 0;; ++pass) {
        const long k_max = std::min(k_min + options.n_max - 1, k_max_bound(k_star));
        if (k_max < k_min) {
            result.trace.stop_reason = pass == 0 ? "no testable frequency" : "window exhausted";
            break;
        }
        SearchPass record;
        record.start_index = static_cast<int>(k_star);
        record.omega0 = G.grid.omega(static_cast<int>(k_star));

        ScanCovarianceSweep sweep(terms, static_cast<int>(k_star));
        for (long k = k_min; k <= k_max; ++k) {
            const ScanWindow w{static_cast<int>(k_star), static_cast<int>(k)};
            const double Q = scan_statistic(G_test, w);
            const NullCovariance cov = sweep.covariance(w.length, !options.block_diagonal);
            const auto stream = stream_key(options.seed, {static_cast<std::uint64_t>(pass), static_cast<std::uint64_t>(k)});
            const NullDraws draws = draw_null_scan(cov, options.d0, G.tapers, stream, sim);
            record.widths.push_back(static_cast<int>(k));
            record.targets.push_back(G.grid.omega(w.target()));
            record.statistics.push_back(Q);
            record.pvalues.push_back(p_value(draws, Q));
        }
        record.rejected = hochberg(record.pvalues, options.alpha);

        if (record.rejected.empty()) {
            record.action = "advance";
            k_star += k_max;
        } else {
            // Rejections are ascending in width, so the first is the smallest frequency.
            const long cut_index = k_star + record.widths[record.rejected.front()];
            record.action = "cut";
            record.cut = G.grid.omega(static_cast<int>(cut_index));
            result.partition.cuts.push_back(record.cut);
            k_star = cut_index + k_min;
        }
        result.trace.passes.push_back(std::move(record));
        if (past_end(k_star)) {
            result.trace.stop_reason = "reached upper frequency margin";
            break;
        }
    }
    return result;
}

}  // namespace fbands
