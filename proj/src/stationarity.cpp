#include "fbands/stationarity.hpp"

#include <cmath>
#include <string>

#include "fbands/error.hpp"
#include "fbands/inchworm.hpp"

namespace fbands {

std::vector<int> band_indices(const FrequencyGrid& grid, double omega1, double omega2) {
    if (!(omega1 >= 0.0 && omega1 < omega2 && omega2 <= 0.5))
        throw config_error("band must satisfy 0 <= omega1 < omega2 <= 0.5");
    const int lo = std::max(1, grid.index_at_or_above(omega1));
    const int hi = std::min(grid.size(), grid.index_at_or_above(omega2) - 1);
    std::vector<int> idx;
    for (int k = lo; k <= hi; ++k) idx.push_back(k);
    return idx;
}

double stationarity_statistic(const DemeanedSpectrum& G, double omega1, double omega2) {
    const auto idx = band_indices(G.grid, omega1, omega2);
    if (idx.empty()) throw config_error("band [" + std::to_string(omega1) + ", " + std::to_string(omega2) +
                                        ") contains no Fourier frequency");
    const int B = G.kernels.blocks();
    const double R = G.kernels.grid_size();
    double sum = 0.0;
    for (int b = 0; b < B; ++b)
        for (int k : idx) sum += G.kernels.at(b, k).squaredNorm() / (R * R);
    return (omega2 - omega1) * sum / (static_cast<double>(idx.size()) * B);
}

StationarityResult stationarity_test(const DemeanedSpectrum& G, const SpectralEstimate& S, double omega1,
                                     double omega2, const StationarityOptions& options) {
    if (G.kernels.blocks() < 2) throw config_error("stationarity test needs B >= 2");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
    if (options.max_null_frequencies < 1) throw config_error("max_null_frequencies must be >= 1");
    const std::vector<int> test_grid =
        options.test_grid.empty() ? default_test_grid(G.kernels.grid_size()) : options.test_grid;

    StationarityResult out;
    out.omega1 = omega1;
    out.omega2 = omega2;
    out.Q0 = stationarity_statistic(G.restrict_to(test_grid), omega1, omega2);
    out.scaled = G.tapers * out.Q0;

    const auto idx = band_indices(G.grid, omega1, omega2);
    const int m_all = static_cast<int>(idx.size());
    const int m = std::min(m_all, options.max_null_frequencies);
    for (int i : equally_spaced_indices(m_all, m)) out.null_frequencies.push_back(idx[i]);

    const KernelCovarianceTerms terms(S, test_grid, options.null_model);
    const int B = terms.blocks();
    const int n = terms.grid_points() * terms.grid_points();

    // Per-block covariance over the joint (omega, tau, sigma) grid before demeaning.
    std::vector<Eigen::MatrixXcd> raw(B, Eigen::MatrixXcd::Zero(m * n, m * n));
    Eigen::MatrixXcd raw_sum = Eigen::MatrixXcd::Zero(m * n, m * n);
    for (int b = 0; b < B; ++b) {
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                raw[b].block(j * n, k * n, n, n) = terms.term(b, out.null_frequencies[j], out.null_frequencies[k]);
        raw_sum += raw[b];
    }

    NullSimOptions sim;
    sim.method = options.sampling;
    sim.threads = options.threads;
    NullCovariance cov;
    cov.grid_points = terms.grid_points();
    cov.form = options.null_model.form;
    for (int b = 0; b < B; ++b) {
        const Eigen::MatrixXcd combined = demeaning_combination(raw, raw_sum, b, b);
        Eigen::MatrixXd real(0, 0);
        // to_real acts on one (tau, sigma) block at a time; assemble the frequency blocks.
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Eigen::MatrixXd piece = terms.to_real(combined.block(j * n, k * n, n, n));
                if (real.size() == 0) real.resize(m * piece.rows(), m * piece.cols());
                real.block(j * piece.rows(), k * piece.cols(), piece.rows(), piece.cols()) = piece;
            }
        // Clipping alone inflates the null mean by the negative eigenvalue mass.
        cov.blocks.push_back(psd_project_trace_preserving(real));
    }

    // draw_null_scan yields (1/K) sum_b (1/R^2) ||G_b||^2; rescale to
    // (1/B) sum_b (omega2 - omega1) mean_omega (1/R^2) ||H_b(omega)||^2.
    NullDraws draws = draw_null_scan(cov, options.d0, 1, options.seed, sim);
    const double scale = (omega2 - omega1) / (static_cast<double>(m) * B);
    for (double& d : draws.draws) d *= scale;
    out.pvalue = p_value(draws, out.scaled);
    out.reject = out.pvalue <= options.alpha;
    return out;
}

}  // namespace fbands
