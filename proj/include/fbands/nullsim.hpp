#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fbands/scan.hpp"

namespace fbands {

/// Lower-triangular L with L L^T = M + jitter_used * I.
struct PsdFactor {
    Eigen::MatrixXd lower;
    double jitter_used = 0.0;
};

/// Scale-aware default jitter: 1e-8 times the mean diagonal of M.
double default_jitter(const Eigen::MatrixXd& M);

/// Cholesky with escalating diagonal jitter 0, j, 10 j, ..., 1e6 j.
PsdFactor psd_factorize(const Eigen::MatrixXd& M, double jitter);

enum class SamplingMethod {
    Spectral,  // ||G||^2 as an eigenvalue-weighted sum of squared normals
    Cholesky,  // explicit fields G = L z from psd_factorize
};

struct NullSimOptions {
    SamplingMethod method = SamplingMethod::Spectral;
    int threads = 1;
};

/// Simulated values of (1/K) sum_b ||G_b||^2 under the null.
struct NullDraws {
    std::vector<double> draws;
    std::uint64_t seed = 0;
    bool block_diagonal = true;

    int size() const { return static_cast<int>(draws.size()); }
};

/// Quadratic-form weights such that ||G||^2 = sum_m weights[m] z_m^2 for z iid N(0,1).
/// Eigenvalues below 1e-12 of the largest are dropped.
std::vector<double> quadratic_form_weights(const Eigen::MatrixXd& covariance);

/// Draws (1/K) sum_b (1/R_test^2) sum_{i,j} |G_b(tau_i, sigma_j)|^2. Independent
/// across blocks when C.full is absent, jointly from C.full otherwise.
/// Draw i, block b uses the random stream keyed by (seed, i, b).
NullDraws draw_null_scan(const NullCovariance& C, int d0, int tapers, std::uint64_t seed,
                         const NullSimOptions& options = {});

/// Fraction of draws strictly greater than the observed value. An observed
/// value of exactly zero (no deviation at all) has p-value 1.
double p_value(const NullDraws& null, double observed);

/// Fills out[i] with sum_m weights[m] z_m^2 where z is drawn from the stream
/// keyed by (seed, i, block); accumulates into out.
void accumulate_weighted_chisq(std::vector<double>& out, const std::vector<double>& weights, std::uint64_t seed,
                               int block, int threads);

}  // namespace fbands
