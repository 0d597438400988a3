#include "fbands/multitaper.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fbands/error.hpp"
#include "fft.hpp"

namespace fbands {

KernelArray KernelArray::restrict_to(const std::vector<int>& grid_indices) const {
    const int Rn = static_cast<int>(grid_indices.size());
    for (int g : grid_indices)
        if (g < 0 || g >= R_) throw config_error("grid index " + std::to_string(g) + " out of range");
    KernelArray out(B_, NB_, Rn);
    for (int b = 0; b < B_; ++b)
        for (int k = 1; k <= NB_; ++k) {
            auto src = at(b, k);
            auto dst = out.at(b, k);
            for (int i = 0; i < Rn; ++i)
                for (int j = 0; j < Rn; ++j) dst(i, j) = src(grid_indices[i], grid_indices[j]);
        }
    return out;
}

RowMatrix sine_taper_matrix(int block_length, int tapers) {
    if (tapers < 1) throw config_error("taper count must be >= 1");
    if (tapers >= block_length)
        throw config_error("too many tapers: K=" + std::to_string(tapers) + " >= T_B=" + std::to_string(block_length));
    const double scale = std::sqrt(2.0 / (block_length + 1));
    RowMatrix v(block_length, tapers);
    for (int s = 1; s <= block_length; ++s)
        for (int k = 1; k <= tapers; ++k)
            v(s - 1, k - 1) = scale * std::sin(std::numbers::pi * k * s / (block_length + 1));
    return v;
}

int tapers_for_bandwidth(double bandwidth, int block_length) {
    if (!(bandwidth > 0.0 && bandwidth < 0.5)) throw config_error("bandwidth must lie in (0, 0.5)");
    // Small guard so exact products such as 0.05 * 320 = 16 are not floored to 15.
    const int K = static_cast<int>(std::floor(bandwidth * (block_length + 1) + 1e-9)) - 1;
    return std::max(1, K);
}

Eigen::VectorXcd fdft(const FunctionalTimeSeries& X, const BlockPlan& plan, int block, int taper, int tapers,
                      double omega) {
    if (block < 0 || block >= plan.blocks()) throw config_error("block index out of range");
    if (taper < 1 || taper > tapers) throw config_error("taper index out of range");
    if (!(omega > 0.0 && omega < 0.5)) throw config_error("frequency must lie in (0, 0.5)");
    if (X.length() < plan.effective_length()) throw config_error("series shorter than block plan");
    const int TB = plan.block_length();
    const double scale = std::sqrt(2.0 / (TB + 1));
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(X.grid_size());
    for (int s = 1; s <= TB; ++s) {
        const int t = plan.block_start(block) + s;  // 1-based global time
        const double v = scale * std::sin(std::numbers::pi * taper * s / (TB + 1));
        const cd phase = std::polar(v, -2.0 * std::numbers::pi * omega * t);
        out += phase * X.values().row(t - 1).transpose().cast<cd>();
    }
    return out;
}

SpectralEstimate multitaper_spectrum(const FunctionalTimeSeries& X, const BlockPlan& plan, int tapers,
                                     const MultitaperOptions& options) {
    if (X.length() < plan.effective_length()) throw config_error("series shorter than block plan");
    const int TB = plan.block_length();
    const RowMatrix v = sine_taper_matrix(TB, tapers);
    FrequencyGrid grid(TB);
    const int NB = grid.size();
    const int R = X.grid_size();
    const int B = plan.blocks();

    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(R);
    if (options.center) mean = X.values().topRows(plan.effective_length()).colwise().mean();

    KernelArray kernels(B, NB, R);
    detail::ComplexFft fft(TB, FFTW_FORWARD);
    // dft(k-1, r) for one (block, taper): Fourier index k = 1..NB, column r.
    KernelMatrix dft(NB, R);
    for (int b = 0; b < B; ++b) {
        for (int taper = 0; taper < tapers; ++taper) {
            for (int r = 0; r < R; ++r) {
                auto in = fft.input();
                for (int s = 0; s < TB; ++s)
                    in[s] = v(s, taper) * (X.values()(plan.block_start(b) + s, r) - mean(r));
                fft.execute();
                auto out = fft.output();
                // FFTW indexes local time from 0; the series uses t = start + s with s >= 1,
                // and exp(-i 2 pi k start / T_B) = 1 on the Fourier grid.
                for (int k = 1; k <= NB; ++k)
                    dft(k - 1, r) = out[k] * std::polar(1.0, -2.0 * std::numbers::pi * k / TB);
            }
            for (int k = 1; k <= NB; ++k) {
                auto d = dft.row(k - 1);
                kernels.at(b, k) += d.transpose() * d.conjugate();
            }
        }
        for (int k = 1; k <= NB; ++k) {
            auto f = kernels.at(b, k);
            f /= static_cast<double>(tapers);
            KernelMatrix sym = 0.5 * (f + f.adjoint());
            f = sym;
        }
    }
    return {std::move(kernels), plan, grid, tapers};
}

DemeanedSpectrum demean_spectrum(const SpectralEstimate& S) {
    const int B = S.kernels.blocks();
    if (B < 2) throw config_error("degenerate demean: B = 1 leaves an identically zero spectrum");
    const int NB = S.kernels.frequencies();
    const int R = S.kernels.grid_size();
    KernelArray g(B, NB, R);
    for (int k = 1; k <= NB; ++k) {
        KernelMatrix mean = KernelMatrix::Zero(R, R);
        for (int b = 0; b < B; ++b) mean += S.kernels.at(b, k);
        mean /= static_cast<double>(B);
        for (int b = 0; b < B; ++b) g.at(b, k) = S.kernels.at(b, k) - mean;
    }
    return {std::move(g), S.plan, S.grid, S.tapers};
}

std::vector<double> taper_overlap(int block_length, int tapers, int max_lag) {
    const RowMatrix v = sine_taper_matrix(block_length, tapers);
    if (max_lag < 0 || max_lag >= block_length) throw config_error("taper overlap lag out of range");
    std::vector<double> rho(max_lag + 1, 0.0);
    detail::ComplexFft fft(block_length, FFTW_FORWARD);
    for (int k = 0; k < tapers; ++k) {
        for (int l = k; l < tapers; ++l) {
            auto in = fft.input();
            for (int s = 0; s < block_length; ++s) in[s] = v(s, k) * v(s, l);
            fft.execute();
            auto out = fft.output();
            const double weight = (k == l) ? 1.0 : 2.0;
            for (int m = 0; m <= max_lag; ++m) rho[m] += weight * std::norm(out[m]);
        }
    }
    for (double& r : rho) r /= tapers;
    return rho;
}

}  // namespace fbands
