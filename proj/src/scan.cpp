#include "fbands/scan.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fbands/error.hpp"

namespace fbands {

ScanWindow make_scan_window(const FrequencyGrid& grid, double omega0, double delta) {
    const double k0 = omega0 * grid.block_length();
    const double L = delta * grid.block_length();
    const long k0r = std::lround(k0);
    const long Lr = std::lround(L);
    if (std::abs(k0 - k0r) > 1e-6 || std::abs(L - Lr) > 1e-6)
        throw config_error("scan window endpoints must lie on the Fourier grid");
    ScanWindow w{static_cast<int>(k0r), static_cast<int>(Lr)};
    if (w.length < 1) throw config_error("invalid scan window: empty");
    if (w.start < 1 || w.target() > grid.size()) throw config_error("invalid scan window: outside the frequency grid");
    return w;
}

namespace {

void check_window(const KernelArray& kernels, const ScanWindow& w) {
    if (w.length < 1) throw config_error("invalid scan window: empty");
    if (w.start < 1 || w.target() > kernels.frequencies())
        throw config_error("invalid scan window: [" + std::to_string(w.start) + ", " + std::to_string(w.target()) +
                           "] outside 1.." + std::to_string(kernels.frequencies()));
}

}  // namespace

std::vector<KernelMatrix> band_average(const DemeanedSpectrum& G, const ScanWindow& w) {
    check_window(G.kernels, w);
    const int R = G.kernels.grid_size();
    std::vector<KernelMatrix> avg(G.kernels.blocks(), KernelMatrix::Zero(R, R));
    for (int b = 0; b < G.kernels.blocks(); ++b) {
        for (int k = w.start; k < w.target(); ++k) avg[b] += G.kernels.at(b, k);
        avg[b] /= static_cast<double>(w.length);
    }
    return avg;
}

double scan_statistic(const DemeanedSpectrum& G, const ScanWindow& w) {
    if (G.kernels.blocks() < 2) throw config_error("scan statistic needs B >= 2");
    const auto avg = band_average(G, w);
    const double R = G.kernels.grid_size();
    double Q = 0.0;
    for (int b = 0; b < G.kernels.blocks(); ++b)
        Q += (G.kernels.at(b, w.target()) - avg[b]).squaredNorm() / (R * R);
    return Q;
}

cd F_kernel(const SpectralEstimate& S, int block, int k1, int k2, int i1, int j1, int i2, int j2,
            FKernelVariant variant) {
    const auto& f = S.kernels;
    const int k_cross = (variant == FKernelVariant::Printed) ? k2 : k1;
    return f(block, k1, i1, i2) * f(block, k2, j1, j2) + f(block, k_cross, i1, j2) * f(block, k2, i2, j1);
}

cd C_kernel(const SpectralEstimate& S, int b1, int b2, int k1, int k2, int i1, int j1, int i2, int j2,
            FKernelVariant variant) {
    const int B = S.kernels.blocks();
    cd sum = 0.0;
    for (int l = 0; l < B; ++l) sum += F_kernel(S, l, k1, k2, i1, j1, i2, j2, variant);
    const double invB = 1.0 / B;
    if (b1 == b2) return (1.0 - 2.0 * invB) * F_kernel(S, b1, k1, k2, i1, j1, i2, j2, variant) + invB * invB * sum;
    return -invB * F_kernel(S, b1, k1, k2, i1, j1, i2, j2, variant) -
           invB * F_kernel(S, b2, k1, k2, i1, j1, i2, j2, variant) + invB * invB * sum;
}

KernelCovarianceTerms::KernelCovarianceTerms(const SpectralEstimate& S, std::vector<int> test_grid, NullModel model)
    : kernels_(S.kernels.restrict_to(test_grid)), model_(model) {
    if (test_grid.size() < 2) throw config_error("test grid needs at least 2 points");
    if (static_cast<int>(test_grid.size()) > S.kernels.grid_size())
        throw config_error("test grid larger than observed grid");
    if (model_.coupling == FrequencyCoupling::TaperOverlap)
        rho_ = taper_overlap(S.plan.block_length(), S.tapers, S.kernels.frequencies());
}

double KernelCovarianceTerms::weight(int k1, int k2) const {
    switch (model_.coupling) {
        case FrequencyCoupling::Verbatim: return 1.0;
        case FrequencyCoupling::Diagonal: return k1 == k2 ? 1.0 : 0.0;
        case FrequencyCoupling::TaperOverlap: return rho_[std::abs(k1 - k2)];
    }
    return 0.0;
}

Eigen::MatrixXcd KernelCovarianceTerms::term(int block, int k1, int k2) const {
    const int R = kernels_.grid_size();
    const int n = R * R;
    const double w = weight(k1, k2);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    if (w == 0.0) return out;
    const auto f1 = kernels_.at(block, k1);
    const auto f2 = kernels_.at(block, k2);
    // Row index a = tau1 * R + sigma1, column index c = tau2 * R + sigma2.
    if (model_.form == CovarianceForm::Complex) {
        for (int t1 = 0; t1 < R; ++t1)
            for (int s1 = 0; s1 < R; ++s1)
                for (int t2 = 0; t2 < R; ++t2)
                    for (int s2 = 0; s2 < R; ++s2)
                        out(t1 * R + s1, t2 * R + s2) = w * f1(t1, t2) * std::conj(f2(s1, s2));
    } else {
        const auto fx = (model_.variant == FKernelVariant::Printed) ? f2 : f1;
        for (int t1 = 0; t1 < R; ++t1)
            for (int s1 = 0; s1 < R; ++s1)
                for (int t2 = 0; t2 < R; ++t2)
                    for (int s2 = 0; s2 < R; ++s2)
                        out(t1 * R + s1, t2 * R + s2) = w * (f1(t1, t2) * f2(s1, s2) + fx(t1, s2) * f2(t2, s1));
    }
    return out;
}

Eigen::MatrixXd KernelCovarianceTerms::to_real(const Eigen::MatrixXcd& m) const {
    if (model_.form == CovarianceForm::RealPart) return m.real();
    // m(a, c) = E[D_a conj(D_c)]. Hermitian kernels give D_{(s,t)} = conj(D_{(t,s)}), so
    // the pseudo-covariance E[D_a D_c] is m(a, c^T) with c^T the transposed pair.
    const int R = kernels_.grid_size();
    const int n = R * R;
    Eigen::MatrixXcd pseudo(n, n);
    for (int a = 0; a < n; ++a)
        for (int t = 0; t < R; ++t)
            for (int s = 0; s < R; ++s) pseudo(a, t * R + s) = m(a, s * R + t);
    Eigen::MatrixXd out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = 0.5 * (m + pseudo).real();
    out.bottomRightCorner(n, n) = 0.5 * (m - pseudo).real();
    out.topRightCorner(n, n) = 0.5 * (pseudo - m).imag();
    out.bottomLeftCorner(n, n) = 0.5 * (m + pseudo).imag();
    return out;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw numeric_error("eigendecomposition failed during PSD projection");
    const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd out = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd psd_project_trace_preserving(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw numeric_error("eigendecomposition failed during PSD projection");
    const double total = es.eigenvalues().sum();
    Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    const double kept = lambda.sum();
    if (total <= 0.0 || kept <= 0.0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    lambda *= total / kept;
    Eigen::MatrixXd out = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

Eigen::MatrixXcd demeaning_combination(const std::vector<Eigen::MatrixXcd>& per_block,
                                       const Eigen::MatrixXcd& block_sum, int b1, int b2) {
    const double invB = 1.0 / static_cast<double>(per_block.size());
    if (b1 == b2) return (1.0 - 2.0 * invB) * per_block[b1] + invB * invB * block_sum;
    return -invB * per_block[b1] - invB * per_block[b2] + invB * invB * block_sum;
}

ScanCovarianceSweep::ScanCovarianceSweep(const KernelCovarianceTerms& terms, int start)
    : terms_(terms), start_(start) {
    const int n = terms.grid_points() * terms.grid_points();
    window_sum_.assign(terms.blocks(), Eigen::MatrixXcd::Zero(n, n));
}

void ScanCovarianceSweep::extend_to(int length) {
    if (length < length_) throw config_error("scan covariance sweep cannot shrink its window");
    for (; length_ < length; ++length_) {
        const int added = start_ + length_;
        for (int b = 0; b < terms_.blocks(); ++b) {
            auto& sum = window_sum_[b];
            for (int j = start_; j < added; ++j) sum += terms_.term(b, j, added) + terms_.term(b, added, j);
            sum += terms_.term(b, added, added);
        }
    }
}

NullCovariance ScanCovarianceSweep::covariance(int length, bool include_offdiag) {
    if (length < 1) throw config_error("invalid scan window: empty");
    extend_to(length);
    const int B = terms_.blocks();
    const int target = start_ + length;
    const double L = length;

    // Per-block covariance of g(target) - window mean before block demeaning.
    std::vector<Eigen::MatrixXcd> raw(B);
    const int n = terms_.grid_points() * terms_.grid_points();
    Eigen::MatrixXcd raw_sum = Eigen::MatrixXcd::Zero(n, n);
    for (int b = 0; b < B; ++b) {
        Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(n, n);
        for (int j = start_; j < target; ++j) cross += terms_.term(b, target, j) + terms_.term(b, j, target);
        raw[b] = terms_.term(b, target, target) + window_sum_[b] / (L * L) - cross / L;
        raw_sum += raw[b];
    }

    NullCovariance out;
    out.grid_points = terms_.grid_points();
    out.form = terms_.model().form;
    out.blocks.resize(B);
    for (int b = 0; b < B; ++b) out.blocks[b] = psd_project(terms_.to_real(demeaning_combination(raw, raw_sum, b, b)));

    if (include_offdiag) {
        const int d = static_cast<int>(out.blocks.front().rows());
        Eigen::MatrixXd full(B * d, B * d);
        for (int b1 = 0; b1 < B; ++b1) {
            full.block(b1 * d, b1 * d, d, d) = out.blocks[b1];
            for (int b2 = b1 + 1; b2 < B; ++b2) {
                const Eigen::MatrixXd cross = terms_.to_real(demeaning_combination(raw, raw_sum, b1, b2));
                full.block(b1 * d, b2 * d, d, d) = cross;
                full.block(b2 * d, b1 * d, d, d) = cross.transpose();
            }
        }
        out.full = std::move(full);
    }
    return out;
}

NullCovariance null_covariance(const SpectralEstimate& S, const ScanWindow& w, const std::vector<int>& test_grid,
                               bool include_offdiag, const NullModel& model) {
    check_window(S.kernels, w);
    for (int g : test_grid)
        if (g < 0 || g >= S.kernels.grid_size())
            throw config_error("test grid is not a subset of the observed grid");
    KernelCovarianceTerms terms(S, test_grid, model);
    ScanCovarianceSweep sweep(terms, w.start);
    return sweep.covariance(w.length, include_offdiag);
}

}  // namespace fbands
