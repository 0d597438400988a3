#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fbands/error.hpp"
#include "fbands/nullsim.hpp"
#include "support/fixtures.hpp"

using namespace fbands;
using namespace fbands::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXd random_psd(int n, int rank, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd A(n, rank);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j) A(i, j) = normal(gen);
    return A * A.transpose() / rank;
}

NullCovariance covariance_of(std::vector<Eigen::MatrixXd> blocks, int grid_points) {
    NullCovariance C;
    C.grid_points = grid_points;
    C.form = CovarianceForm::RealPart;
    C.blocks = std::move(blocks);
    return C;
}

}  // namespace

TEST_CASE("psd_factorize on the identity") {
    const auto f = psd_factorize(Eigen::MatrixXd::Identity(3, 3), 1e-8);
    CHECK(f.lower == Eigen::MatrixXd::Identity(3, 3));
    CHECK(f.jitter_used == 0.0);
}

TEST_CASE("psd_factorize matches a hand Cholesky") {
    Eigen::MatrixXd M(2, 2);
    M << 4, 2, 2, 3;
    const auto f = psd_factorize(M, 1e-8);
    CHECK_THAT(f.lower(0, 0), WithinAbs(2.0, 1e-15));
    CHECK_THAT(f.lower(0, 1), WithinAbs(0.0, 1e-15));
    CHECK_THAT(f.lower(1, 0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(f.lower(1, 1), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK(f.jitter_used == 0.0);
}

TEST_CASE("psd_factorize adds jitter to a rank-one matrix") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Ones(2, 2);
    // The factorization oracle: plain LLT fails without jitter.
    REQUIRE(Eigen::LLT<Eigen::MatrixXd>(M).info() != Eigen::Success);
    const auto f = psd_factorize(M, 1e-6);
    CHECK(f.jitter_used == 1e-6);
    const Eigen::MatrixXd back = f.lower * f.lower.transpose();
    CHECK((back - M - 1e-6 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd_factorize rejects asymmetric and indefinite input") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 2, 0, 1;
    CHECK_THROWS_AS(psd_factorize(A, 1e-8), Error);
    Eigen::MatrixXd N(2, 2);
    N << 1, 0, 0, -1;
    CHECK_THROWS_AS(psd_factorize(N, 1e-8), Error);
    CHECK_THROWS_AS(psd_factorize(Eigen::MatrixXd(2, 3), 1e-8), Error);
}

TEST_CASE("draws from a zero covariance are zero") {
    const auto C = covariance_of({Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 4)}, 2);
    for (auto method : {SamplingMethod::Spectral, SamplingMethod::Cholesky}) {
        const auto d = draw_null_scan(C, 1000, 3, 7, {method, 1});
        CHECK(d.size() == 1000);
        for (double x : d.draws) CHECK(x == 0.0);
    }
}

TEST_CASE("draws are reproducible and independent of thread count") {
    const auto C = covariance_of({random_psd(9, 5, 1), random_psd(9, 9, 2), random_psd(9, 3, 3)}, 3);
    for (auto method : {SamplingMethod::Spectral, SamplingMethod::Cholesky}) {
        const auto a = draw_null_scan(C, 5000, 2, 99, {method, 1});
        const auto b = draw_null_scan(C, 5000, 2, 99, {method, 1});
        const auto c = draw_null_scan(C, 5000, 2, 99, {method, 4});
        const auto other = draw_null_scan(C, 5000, 2, 100, {method, 1});
        CHECK(a.draws == b.draws);
        CHECK(a.draws == c.draws);
        CHECK(a.draws != other.draws);
        for (double x : a.draws) CHECK(x >= 0.0);
    }
}

TEST_CASE("draw mean matches the trace formula within three standard errors") {
    const int K = 3, R = 3, d0 = 100000;
    std::vector<Eigen::MatrixXd> blocks{random_psd(9, 4, 11), random_psd(9, 9, 12), random_psd(9, 2, 13),
                                        random_psd(9, 6, 14)};
    double mean = 0.0, var = 0.0;
    const double scale = 1.0 / (K * R * R);
    for (const auto& b : blocks) {
        mean += scale * b.trace();
        var += 2.0 * scale * scale * (b * b).trace();
    }
    const auto C = covariance_of(blocks, R);
    for (auto method : {SamplingMethod::Spectral, SamplingMethod::Cholesky}) {
        const auto d = draw_null_scan(C, d0, K, 5, {method, 1});
        double m = 0.0;
        for (double x : d.draws) m += x;
        m /= d0;
        CHECK(std::abs(m - mean) < 3.0 * std::sqrt(var / d0));
    }
}

TEST_CASE("joint sampling from a block-diagonal full matrix has the same law") {
    const Eigen::MatrixXd b0 = random_psd(4, 4, 31), b1 = random_psd(4, 2, 32);
    auto C = covariance_of({b0, b1}, 2);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(8, 8);
    full.topLeftCorner(4, 4) = b0;
    full.bottomRightCorner(4, 4) = b1;
    C.full = full;
    const auto d = draw_null_scan(C, 100000, 1, 8);
    CHECK_FALSE(d.block_diagonal);
    double m = 0.0;
    for (double x : d.draws) m += x;
    m /= d.size();
    const double expected = (b0.trace() + b1.trace()) / 4.0;
    const double sd = std::sqrt(2.0 * ((b0 * b0).trace() + (b1 * b1).trace())) / 4.0;
    CHECK(std::abs(m - expected) < 3.0 * sd / std::sqrt(100000.0));
}

TEST_CASE("draw_null_scan argument checks") {
    const auto C = covariance_of({Eigen::MatrixXd::Identity(4, 4)}, 2);
    CHECK_THROWS_AS(draw_null_scan(C, 999, 1, 1), Error);
    CHECK_THROWS_AS(draw_null_scan(C, 1000, 0, 1), Error);
    CHECK_THROWS_AS(draw_null_scan(NullCovariance{}, 1000, 1, 1), Error);
}

TEST_CASE("p-value counts strictly greater draws") {
    NullDraws n;
    n.draws = {1, 2, 3, 4};
    CHECK(p_value(n, 2.5) == 0.5);
    CHECK(p_value(n, 5.0) == 0.0);
    CHECK(p_value(n, 0.5) == 1.0);
    CHECK(p_value(n, 2.0) == 0.5);  // ties are not counted
    CHECK(p_value(n, 0.0) == 1.0);
    CHECK_THROWS_AS(p_value(NullDraws{}, 1.0), Error);
}

TEST_CASE("p-value is nonincreasing in the observed value") {
    const auto C = covariance_of({random_psd(4, 4, 41)}, 2);
    const auto d = draw_null_scan(C, 2000, 1, 3);
    double last = 1.0;
    for (double q = 0.0; q < 5.0; q += 0.01) {
        const double p = p_value(d, q);
        CHECK(p <= last);
        CHECK(p >= 0.0);
        last = p;
    }
}

TEST_CASE("quadratic form weights are the positive eigenvalues") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
    M.diagonal() << 2.0, 0.0, 5.0;
    const auto w = quadratic_form_weights(M);
    REQUIRE(w.size() == 2);
    CHECK_THAT(w[0], WithinRel(5.0, 1e-14));
    CHECK_THAT(w[1], WithinRel(2.0, 1e-14));
    CHECK(quadratic_form_weights(Eigen::MatrixXd::Zero(2, 2)).empty());
}

TEST_CASE("block-diagonal and full covariance give close p-values on white noise") {
    // Cross-block terms are O(1/B) and barely move the p-value for moderate B.
    const int TB = 500, B = 10, R = 5, reps = 100;
    const std::vector<int> tg = equally_spaced_indices(R, 4);
    const ScanWindow w{25, 30};
    int close = 0;
    for (int r = 0; r < reps; ++r) {
        const auto X = gaussian_series(TB * B, R, 5000 + r);
        const auto S = multitaper_spectrum(X, BlockPlan(TB * B, B), tapers_for_bandwidth(0.05, TB));
        const auto G = demean_spectrum(S).restrict_to(tg);
        const double Q = scan_statistic(G, w);
        const auto cov = null_covariance(S, w, tg, true, {});
        NullCovariance bd = cov;
        bd.full.reset();
        const double p_bd = p_value(draw_null_scan(bd, 20000, S.tapers, r), Q);
        const double p_full = p_value(draw_null_scan(cov, 20000, S.tapers, r), Q);
        if (std::abs(p_bd - p_full) < 0.05) ++close;
    }
    CHECK(close >= 90);
}
