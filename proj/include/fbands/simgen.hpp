#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fbands/core.hpp"
#include "fbands/inchworm.hpp"

namespace fbands {

enum class SimSetting { WhiteNoise, Linear, Sinusoidal };

SimSetting parse_setting(std::string_view name);  // "white-noise", "linear", "sinusoidal"
std::string setting_name(SimSetting s);

/// True band partition of a setting: no cuts for white noise, 0.15 and 0.35 otherwise.
BandPartition true_partition(SimSetting s);

/// 0-based index of the true band holding omega, honouring each setting's
/// open/closed interval ends. omega = 0 maps to the first band, 0.5 to the last.
int true_band(SimSetting s, double omega);

/// Time-varying modulation phi(u, omega).
double phi(SimSetting s, double u, double omega);

/// R x n_basis cubic B-spline basis on uniform clamped knots over [0, 1].
Eigen::MatrixXd bspline_basis(const std::vector<double>& grid, int n_basis = 15);

/// Band-modulated functional white noise: the spectrum is power(p, u) f(tau, sigma)
/// for frequencies in band p = band_of(omega). Each band is isolated by DFT masking
/// over the full series and scaled by sqrt(power(p, t / T)).
FunctionalTimeSeries simulate_modulated(int bands, const std::function<int(double)>& band_of,
                                        const std::function<double(int, double)>& power, int T, int R,
                                        std::uint64_t seed);

/// Series of length T on R equally spaced grid points with spectrum phi(u, omega) f(tau, sigma),
/// f(tau, sigma) = sum_j B_j(tau) B_j(sigma).
FunctionalTimeSeries simulate_fts(SimSetting s, int T, int R, std::uint64_t seed);

/// Rand index between two partitions of the Fourier frequencies of grid.
/// A frequency omega lies in band #{cuts <= omega}.
double rand_index(const BandPartition& estimated, const BandPartition& truth, const FrequencyGrid& grid);

}  // namespace fbands
