#include "fbands/nullsim.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/random/normal_distribution.hpp>

#include "fbands/error.hpp"
#include "fbands/parallel.hpp"
#include "fbands/random.hpp"

namespace fbands {

double default_jitter(const Eigen::MatrixXd& M) {
    if (M.rows() == 0) return 0.0;
    return 1e-8 * std::abs(M.diagonal().mean());
}

PsdFactor psd_factorize(const Eigen::MatrixXd& M, double jitter) {
    if (M.rows() != M.cols()) throw config_error("psd_factorize needs a square matrix");
    const auto n = M.rows();
    if (n == 0) return {};
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw config_error("psd_factorize needs a symmetric matrix");
    if (M.isZero(0.0)) return {Eigen::MatrixXd::Zero(n, n), 0.0};

    double j = 0.0;
    for (int attempt = 0;; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(M + j * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) return {llt.matrixL(), j};
        if (jitter <= 0.0 || j >= 1e6 * jitter * (1 - 1e-12))
            throw numeric_error("covariance not positive semidefinite after jitter " + std::to_string(j));
        j = (attempt == 0) ? jitter : j * 10.0;
    }
}

std::vector<double> quadratic_form_weights(const Eigen::MatrixXd& covariance) {
    const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("eigendecomposition of null covariance failed");
    const double top = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    std::vector<double> w;
    if (top <= 0.0) return w;
    // Largest first, so truncation and summation order are stable.
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
        if (es.eigenvalues()(i) > 1e-12 * top) w.push_back(es.eigenvalues()(i));
    return w;
}

void accumulate_weighted_chisq(std::vector<double>& out, const std::vector<double>& weights, std::uint64_t seed,
                               int block, int threads) {
    if (weights.empty()) return;
    const int n = static_cast<int>(out.size());
    parallel_for(n, threads, [&](int begin, int end) {
        boost::random::normal_distribution<double> normal;
        for (int i = begin; i < end; ++i) {
            CounterRng rng(stream_key(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(block)}));
            double s = 0.0;
            for (double w : weights) {
                const double z = normal(rng);
                s += w * z * z;
            }
            out[i] += s;
        }
    });
}

namespace {

void accumulate_cholesky(std::vector<double>& out, const Eigen::MatrixXd& lower, std::uint64_t seed, int block,
                         int threads) {
    const int n = static_cast<int>(out.size());
    const auto dim = lower.rows();
    parallel_for(n, threads, [&](int begin, int end) {
        boost::random::normal_distribution<double> normal;
        Eigen::VectorXd z(dim);
        for (int i = begin; i < end; ++i) {
            CounterRng rng(stream_key(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(block)}));
            for (Eigen::Index m = 0; m < dim; ++m) z(m) = normal(rng);
            out[i] += (lower.triangularView<Eigen::Lower>() * z).squaredNorm();
        }
    });
}

}  // namespace

NullDraws draw_null_scan(const NullCovariance& C, int d0, int tapers, std::uint64_t seed,
                         const NullSimOptions& options) {
    if (d0 < 1000) throw config_error("d0 must be >= 1000, got " + std::to_string(d0));
    if (tapers < 1) throw config_error("taper count must be >= 1");
    if (C.blocks.empty()) throw config_error("null covariance has no blocks");

    NullDraws out;
    out.seed = seed;
    out.block_diagonal = !C.full.has_value();
    out.draws.assign(d0, 0.0);

    auto sample = [&](const Eigen::MatrixXd& cov, int block) {
        if (options.method == SamplingMethod::Spectral) {
            accumulate_weighted_chisq(out.draws, quadratic_form_weights(cov), seed, block, options.threads);
        } else {
            const Eigen::MatrixXd projected = psd_project(cov);
            accumulate_cholesky(out.draws, psd_factorize(projected, default_jitter(projected)).lower, seed, block,
                                options.threads);
        }
    };
    if (C.full) {
        sample(*C.full, 0);
    } else {
        for (int b = 0; b < static_cast<int>(C.blocks.size()); ++b) sample(C.blocks[b], b);
    }

    const double scale = 1.0 / (static_cast<double>(tapers) * C.grid_points * C.grid_points);
    for (double& d : out.draws) d *= scale;
    return out;
}

double p_value(const NullDraws& null, double observed) {
    if (null.draws.empty()) throw config_error("p-value needs at least one null draw");
    if (observed <= 0.0) return 1.0;
    const auto exceed = std::count_if(null.draws.begin(), null.draws.end(), [&](double d) { return d > observed; });
    return static_cast<double>(exceed) / static_cast<double>(null.draws.size());
}

}  // namespace fbands
