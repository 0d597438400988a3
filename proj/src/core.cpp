#include "fbands/core.hpp"

#include <cmath>
#include <string>

#include "fbands/error.hpp"

namespace fbands {

FunctionalTimeSeries::FunctionalTimeSeries(RowMatrix values, std::vector<double> grid,
                                           std::optional<double> sample_rate_hz)
    : values_(std::move(values)), grid_(std::move(grid)), sample_rate_hz_(sample_rate_hz) {
    if (values_.rows() < 2) throw config_error("functional time series needs T >= 2 rows");
    if (values_.cols() < 1) throw config_error("functional time series needs R >= 1 columns");
    if (static_cast<Eigen::Index>(grid_.size()) != values_.cols())
        throw config_error("grid has " + std::to_string(grid_.size()) + " points but data has " +
                           std::to_string(values_.cols()) + " columns");
    if (!values_.allFinite()) throw config_error("functional time series contains non-finite values");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!(grid_[i] >= 0.0 && grid_[i] <= 1.0)) throw config_error("grid points must lie in [0,1]");
        if (i > 0 && !(grid_[i] > grid_[i - 1])) throw config_error("grid must be strictly increasing");
    }
    if (sample_rate_hz_ && !(*sample_rate_hz_ > 0.0)) throw config_error("sample rate must be positive");
}

std::vector<double> FunctionalTimeSeries::uniform_grid(int R) {
    std::vector<double> g(R);
    if (R == 1) {
        g[0] = 0.5;
        return g;
    }
    for (int i = 0; i < R; ++i) g[i] = static_cast<double>(i) / (R - 1);
    return g;
}

BlockPlan::BlockPlan(int T, int B) : T_(T), B_(B), TB_(0) {
    if (B < 1) throw config_error("block count B must be >= 1");
    if (T < 2 * B)
        throw config_error("invalid block plan: T=" + std::to_string(T) + " < 2B=" + std::to_string(2 * B));
    TB_ = T / B;
}

std::vector<double> BlockPlan::midpoints() const {
    std::vector<double> u(B_);
    for (int b = 0; b < B_; ++b) u[b] = midpoint(b);
    return u;
}

FrequencyGrid::FrequencyGrid(int block_length) : TB_(block_length), NB_(block_length / 2 - 1) {
    if (block_length < 6)
        throw config_error("frequency grid too small: T_B=" + std::to_string(block_length) + " < 6");
}

std::vector<double> FrequencyGrid::frequencies() const {
    std::vector<double> w(NB_);
    for (int k = 1; k <= NB_; ++k) w[k - 1] = omega(k);
    return w;
}

int FrequencyGrid::index_at_or_above(double w) const {
    // Round-off guard so that w = k/T_B maps back onto k.
    return static_cast<int>(std::ceil(w * TB_ - 1e-9));
}

std::vector<int> equally_spaced_indices(int R, int n) {
    if (n < 1 || n > R) throw config_error("cannot pick " + std::to_string(n) + " of " + std::to_string(R) + " grid points");
    std::vector<int> idx(n);
    if (n == 1) {
        idx[0] = (R - 1) / 2;
        return idx;
    }
    for (int i = 0; i < n; ++i)
        idx[i] = static_cast<int>(std::lround(static_cast<double>(i) * (R - 1) / (n - 1)));
    return idx;
}

}  // namespace fbands
