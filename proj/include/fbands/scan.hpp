#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fbands/multitaper.hpp"

namespace fbands {

/// Scan window [omega_k0, omega_k0 + delta) with target omega_k0 + delta.
/// start and length are Fourier indices, so the window covers k0..k0+L-1 and
/// the target sits at k0 + L.
struct ScanWindow {
    int start = 0;
    int length = 0;

    int target() const { return start + length; }
};

/// Window from frequencies; both omega0 and omega0 + delta must lie on the grid.
ScanWindow make_scan_window(const FrequencyGrid& grid, double omega0, double delta);

/// Per-block average of the demeaned kernels over the window frequencies.
std::vector<KernelMatrix> band_average(const DemeanedSpectrum& G, const ScanWindow& w);

/// Q = sum_b (1/R^2) sum_{i,j} |g_{b, target}(i,j) - band_average_b(i,j)|^2.
double scan_statistic(const DemeanedSpectrum& G, const ScanWindow& w);

/// Which form of the second product in F is used. Printed uses omega_2 in both
/// factors; Symmetric pairs omega_1 with omega_2 as in the first product.
enum class FKernelVariant { Printed, Symmetric };

/// Weight attached to the covariance term of a frequency pair (j, k).
enum class FrequencyCoupling {
    Verbatim,      // every pair weighted 1
    Diagonal,      // only j == k
    TaperOverlap,  // rho(|j - k|) from the taper spectral windows
};

/// How the complex kernel covariance is turned into a real Gaussian model.
enum class CovarianceForm {
    RealPart,  // real part of the F-based covariance, R^2 real components
    Complex,   // real and imaginary parts of the kernel jointly, 2 R^2 components
};

struct NullModel {
    FrequencyCoupling coupling = FrequencyCoupling::TaperOverlap;
    CovarianceForm form = CovarianceForm::Complex;
    FKernelVariant variant = FKernelVariant::Printed;

    bool operator==(const NullModel&) const = default;
};

/// F(u_b, omega_k1, omega_k2, tau_i1, sigma_j1, tau_i2, sigma_j2) from estimated kernels.
cd F_kernel(const SpectralEstimate& S, int block, int k1, int k2, int i1, int j1, int i2, int j2,
            FKernelVariant variant = FKernelVariant::Printed);

/// Demeaning-adjusted covariance C(b1, b2, omega_k1, omega_k2, ...) built from F.
cd C_kernel(const SpectralEstimate& S, int b1, int b2, int k1, int k2, int i1, int j1, int i2, int j2,
            FKernelVariant variant = FKernelVariant::Printed);

/// Covariance of the limiting Gaussian fields G_b on a test grid.
struct NullCovariance {
    int grid_points = 0;             // R_test
    CovarianceForm form = CovarianceForm::Complex;
    std::vector<Eigen::MatrixXd> blocks;  // per-block covariance, PSD-projected
    std::optional<Eigen::MatrixXd> full;  // joint covariance across blocks when requested

    int block_dimension() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows()); }
};

/// Pairwise covariance terms between frequencies of one block on a test grid,
/// before block demeaning is applied. Shared by the scan and stationarity nulls.
class KernelCovarianceTerms {
public:
    KernelCovarianceTerms(const SpectralEstimate& S, std::vector<int> test_grid, NullModel model);

    int blocks() const { return kernels_.blocks(); }
    int grid_points() const { return kernels_.grid_size(); }
    const NullModel& model() const { return model_; }

    /// Weighted complex covariance term for block b and frequencies (k1, k2),
    /// a (R_test^2 x R_test^2) matrix indexed by (tau, sigma) pairs.
    Eigen::MatrixXcd term(int block, int k1, int k2) const;

    /// Coupling weight of the frequency pair.
    double weight(int k1, int k2) const;

    /// Real covariance from a combined complex covariance matrix in this model's form.
    /// Square input yields the within-block covariance; the same map applies to cross-block terms.
    Eigen::MatrixXd to_real(const Eigen::MatrixXcd& m) const;

private:
    KernelArray kernels_;
    NullModel model_;
    std::vector<double> rho_;
};

/// Null covariance of the scan statistic for one window.
NullCovariance null_covariance(const SpectralEstimate& S, const ScanWindow& w, const std::vector<int>& test_grid,
                               bool include_offdiag, const NullModel& model = {});

/// Incremental builder for windows sharing a start frequency, as tested in one
/// inchworm pass. Window sums grow by one frequency per call to extend_to.
class ScanCovarianceSweep {
public:
    ScanCovarianceSweep(const KernelCovarianceTerms& terms, int start);

    /// Null covariance for the window [start, start + length).
    NullCovariance covariance(int length, bool include_offdiag);

private:
    void extend_to(int length);

    const KernelCovarianceTerms& terms_;
    int start_;
    int length_ = 0;
    std::vector<Eigen::MatrixXcd> window_sum_;  // per block: sum_{j,k in W} w Gamma(j,k)
};

/// Projects a symmetric matrix onto the PSD cone by clipping negative eigenvalues.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

/// As psd_project, then rescales the kept eigenvalues so the trace is unchanged.
/// A matrix with non-positive trace maps to zero.
Eigen::MatrixXd psd_project_trace_preserving(const Eigen::MatrixXd& m);

/// Applies the block demeaning combination to per-block terms X_l:
/// same block: (1 - 2/B) X_b + (1/B^2) sum_l X_l;
/// distinct blocks: -(1/B) X_b1 - (1/B) X_b2 + (1/B^2) sum_l X_l.
Eigen::MatrixXcd demeaning_combination(const std::vector<Eigen::MatrixXcd>& per_block,
                                       const Eigen::MatrixXcd& block_sum, int b1, int b2);

}  // namespace fbands
