#include "fbands/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <boost/random/normal_distribution.hpp>
#include <gsl/gsl_bspline.h>

#include "fbands/error.hpp"
#include "fbands/random.hpp"
#include "fft.hpp"

namespace fbands {

SimSetting parse_setting(std::string_view name) {
    if (name == "white-noise" || name == "white" || name == "1") return SimSetting::WhiteNoise;
    if (name == "linear" || name == "2") return SimSetting::Linear;
    if (name == "sinusoidal" || name == "3") return SimSetting::Sinusoidal;
    throw config_error("unknown simulation setting '" + std::string(name) + "'");
}

std::string setting_name(SimSetting s) {
    switch (s) {
        case SimSetting::WhiteNoise: return "white-noise";
        case SimSetting::Linear: return "linear";
        case SimSetting::Sinusoidal: return "sinusoidal";
    }
    return "unknown";
}

BandPartition true_partition(SimSetting s) {
    if (s == SimSetting::WhiteNoise) return {};
    return {{0.15, 0.35}};
}

int true_band(SimSetting s, double omega) {
    switch (s) {
        case SimSetting::WhiteNoise: return 0;
        case SimSetting::Linear: return omega < 0.15 ? 0 : (omega < 0.35 ? 1 : 2);
        case SimSetting::Sinusoidal: return omega <= 0.15 ? 0 : (omega <= 0.35 ? 1 : 2);
    }
    return 0;
}

double phi(SimSetting s, double u, double omega) {
    using std::numbers::pi;
    const int band = true_band(s, omega);
    switch (s) {
        case SimSetting::WhiteNoise: return 1.0;
        case SimSetting::Linear:
            if (band == 0) return 10.0 - 9.0 * u;
            if (band == 1) return 5.0;
            return 1.0 + 9.0 * u;
        case SimSetting::Sinusoidal:
            if (band == 0) return 2.0 + std::sin(8.0 * pi * u - pi / 2.0);
            if (band == 1) return 2.0 + std::cos(8.0 * pi * u);
            return 2.0 + std::cos(16.0 * pi * u);
    }
    return 1.0;
}

Eigen::MatrixXd bspline_basis(const std::vector<double>& grid, int n_basis) {
    if (n_basis < 4) throw config_error("cubic B-spline basis needs n_basis >= 4");
    if (grid.size() < 2) throw config_error("B-spline basis needs at least 2 grid points");
    constexpr int order = 4;
    std::unique_ptr<gsl_bspline_workspace, decltype(&gsl_bspline_free)> ws(
        gsl_bspline_alloc(order, static_cast<std::size_t>(n_basis - order + 2)), gsl_bspline_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> values(gsl_vector_alloc(n_basis), gsl_vector_free);
    gsl_bspline_knots_uniform(0.0, 1.0, ws.get());
    Eigen::MatrixXd out(grid.size(), n_basis);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > 1.0) throw config_error("B-spline grid must lie in [0, 1]");
        gsl_bspline_eval(grid[i], values.get(), ws.get());
        for (int j = 0; j < n_basis; ++j) out(i, j) = gsl_vector_get(values.get(), j);
    }
    return out;
}

FunctionalTimeSeries simulate_modulated(int bands, const std::function<int(double)>& band_of,
                                        const std::function<double(int, double)>& power, int T, int R,
                                        std::uint64_t seed) {
    if (T < 2 || T % 2 != 0) throw config_error("simulation needs an even T >= 2");
    if (R < 2) throw config_error("simulation needs R >= 2");
    if (bands < 1) throw config_error("simulation needs at least one band");
    const auto grid = FunctionalTimeSeries::uniform_grid(R);
    const Eigen::MatrixXd basis = bspline_basis(grid);
    const int J = static_cast<int>(basis.cols());

    Eigen::MatrixXd Z(T, J);
    CounterRng rng(stream_key(seed, {0x5e7u}));
    boost::random::normal_distribution<double> normal;
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) Z(t, j) = normal(rng);
    const Eigen::MatrixXd eps = Z * basis.transpose();

    // DFT bin j has frequency min(j, T - j) / T.
    std::vector<int> bin_band(T);
    for (int j = 0; j < T; ++j) {
        bin_band[j] = band_of(static_cast<double>(std::min(j, T - j)) / T);
        if (bin_band[j] < 0 || bin_band[j] >= bands) throw config_error("band_of returned an invalid band");
    }
    std::vector<std::vector<double>> amplitude(bands, std::vector<double>(T));
    for (int p = 0; p < bands; ++p)
        for (int t = 0; t < T; ++t) {
            const double a = power(p, static_cast<double>(t + 1) / T);
            if (!(a >= 0.0)) throw config_error("band power must be nonnegative");
            amplitude[p][t] = std::sqrt(a) / T;
        }

    RowMatrix X = RowMatrix::Zero(T, R);
    detail::ComplexFft forward(T, FFTW_FORWARD);
    detail::ComplexFft backward(T, FFTW_BACKWARD);
    std::vector<std::complex<double>> spectrum(T);
    for (int r = 0; r < R; ++r) {
        auto in = forward.input();
        for (int t = 0; t < T; ++t) in[t] = eps(t, r);
        forward.execute();
        std::copy(forward.output().begin(), forward.output().end(), spectrum.begin());
        for (int p = 0; p < bands; ++p) {
            auto bin = backward.input();
            for (int j = 0; j < T; ++j) bin[j] = bin_band[j] == p ? spectrum[j] : 0.0;
            backward.execute();
            auto xi = backward.output();
            for (int t = 0; t < T; ++t) X(t, r) += amplitude[p][t] * xi[t].real();
        }
    }
    return FunctionalTimeSeries(std::move(X), grid);
}

FunctionalTimeSeries simulate_fts(SimSetting s, int T, int R, std::uint64_t seed) {
    // phi is constant in omega within each band, so any in-band frequency represents it.
    const double representative[] = {0.075, 0.25, 0.425};
    const int bands = true_partition(s).bands();
    return simulate_modulated(
        bands, [s](double w) { return true_band(s, w); },
        [s, bands, &representative](int p, double u) { return phi(s, u, bands == 1 ? 0.25 : representative[p]); }, T, R,
        seed);
}

double rand_index(const BandPartition& estimated, const BandPartition& truth, const FrequencyGrid& grid) {
    const long NB = grid.size();
    if (NB < 2) throw config_error("rand index needs at least 2 frequencies");
    auto labels = [&](const BandPartition& p) {
        if (!std::is_sorted(p.cuts.begin(), p.cuts.end())) throw config_error("partition cuts must be sorted");
        std::vector<int> lab(NB);
        for (long k = 1; k <= NB; ++k) {
            const double w = grid.omega(static_cast<int>(k));
            lab[k - 1] = static_cast<int>(std::upper_bound(p.cuts.begin(), p.cuts.end(), w + 1e-12) - p.cuts.begin());
        }
        return lab;
    };
    const auto a = labels(estimated);
    const auto b = labels(truth);
    const int na = estimated.bands();
    const int nb = truth.bands();
    std::vector<long> table(static_cast<std::size_t>(na) * nb, 0), rows(na, 0), cols(nb, 0);
    for (long k = 0; k < NB; ++k) {
        ++table[static_cast<std::size_t>(a[k]) * nb + b[k]];
        ++rows[a[k]];
        ++cols[b[k]];
    }
    auto pairs = [](long n) { return n * (n - 1) / 2; };
    long both = 0, in_a = 0, in_b = 0;
    for (long n : table) both += pairs(n);
    for (long n : rows) in_a += pairs(n);
    for (long n : cols) in_b += pairs(n);
    const long total = pairs(NB);
    const long separated = total - in_a - in_b + both;
    return static_cast<double>(both + separated) / static_cast<double>(total);
}

}  // namespace fbands
