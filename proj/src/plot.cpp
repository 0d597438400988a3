#include "fbands/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fbands/error.hpp"

namespace fbands {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Piecewise-linear approximation of the viridis colour map.
std::string colour(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double w = t - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] * (1 - w) + stops[i + 1][0] * w)),
                  static_cast<int>(std::lround(stops[i][1] * (1 - w) + stops[i + 1][1] * w)),
                  static_cast<int>(std::lround(stops[i][2] * (1 - w) + stops[i + 1][2] * w)));
    return buf;
}

std::string frequency_label(double omega, std::optional<double> rate) {
    return rate ? fmt("%.1f Hz", omega * *rate) : fmt("%.3f", omega);
}

const char* kLineColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string autospectrum_svg(const SpectralEstimate& S, const BandPartition& partition,
                             std::optional<double> sample_rate_hz) {
    const int B = S.kernels.blocks();
    const int NB = S.kernels.frequencies();
    const int R = S.kernels.grid_size();
    constexpr double W = 640, H = 160, left = 70, top = 30, gap = 50;
    const double total_h = top + R * (H + gap);
    const double cw = W / NB, ch = H / B;

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", left + W + 30) +
                      "\" height=\"" + fmt("%.0f", total_h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i < R; ++i) {
        const double y0 = top + i * (H + gap);
        double lo = INFINITY, hi = -INFINITY;
        std::vector<double> v(static_cast<std::size_t>(B) * NB);
        for (int b = 0; b < B; ++b)
            for (int k = 1; k <= NB; ++k) {
                const double p = std::log10(std::max(S.kernels(b, k, i, i).real(), 1e-300));
                v[static_cast<std::size_t>(b) * NB + k - 1] = p;
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
        const double span = hi > lo ? hi - lo : 1.0;
        svg += "<text x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", y0 - 8) + "\">grid point " +
               std::to_string(i + 1) + ": log10 autospectrum (" + fmt("%.3g", lo) + " to " + fmt("%.3g", hi) + ")</text>\n";
        for (int b = 0; b < B; ++b)
            for (int k = 1; k <= NB; ++k) {
                const double t = (v[static_cast<std::size_t>(b) * NB + k - 1] - lo) / span;
                svg += "<rect x=\"" + fmt("%.2f", left + (k - 1) * cw) + "\" y=\"" + fmt("%.2f", y0 + (B - 1 - b) * ch) +
                       "\" width=\"" + fmt("%.2f", cw + 0.05) + "\" height=\"" + fmt("%.2f", ch + 0.05) + "\" fill=\"" +
                       colour(t) + "\"/>\n";
            }
        for (double c : partition.cuts) {
            const double x = left + (c * S.grid.block_length() - 0.5) * cw;
            svg += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", y0) + "\" x2=\"" + fmt("%.2f", x) +
                   "\" y2=\"" + fmt("%.2f", y0 + H) + "\" stroke=\"#00c853\" stroke-width=\"2\"/>\n";
        }
        svg += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", y0 + 10) +
               "\" text-anchor=\"end\">u=1</text>\n<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" +
               fmt("%.1f", y0 + H) + "\" text-anchor=\"end\">u=0</text>\n";
        for (int tick = 0; tick <= 4; ++tick) {
            const double omega = S.grid.omega(1) + tick * (S.grid.omega(NB) - S.grid.omega(1)) / 4;
            const double x = left + (omega * S.grid.block_length() - 0.5) * cw;
            svg += "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y0 + H + 14) + "\" text-anchor=\"middle\">" +
                   frequency_label(omega, sample_rate_hz) + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string smoothed_g_svg(const std::vector<SmoothedBand>& bands, std::optional<double> sample_rate_hz) {
    constexpr double W = 480, H = 200, left = 70, top = 30, gap = 60;
    const double total_h = top + bands.size() * (H + gap);
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", left + W + 120) +
                      "\" height=\"" + fmt("%.0f", total_h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    std::vector<double> u(101);
    for (int i = 0; i <= 100; ++i) u[i] = i / 100.0;
    for (std::size_t p = 0; p < bands.size(); ++p) {
        const auto& sb = bands[p];
        const double y0 = top + p * (H + gap);
        const int R = static_cast<int>(sb.coefficients.rows());
        std::vector<Eigen::VectorXd> curves;
        double lo = sb.observed.minCoeff(), hi = sb.observed.maxCoeff();
        for (int i = 0; i < R; ++i) {
            curves.push_back(sb.evaluate(i, u));
            lo = std::min(lo, curves.back().minCoeff());
            hi = std::max(hi, curves.back().maxCoeff());
        }
        const double span = hi > lo ? hi - lo : 1.0;
        auto ypix = [&](double v) { return y0 + H - (v - lo) / span * H; };
        svg += "<text x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", y0 - 8) + "\">band [" +
               frequency_label(sb.omega1, sample_rate_hz) + ", " + frequency_label(sb.omega2, sample_rate_hz) +
               "): smoothed g</text>\n";
        svg += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", y0) + "\" width=\"" + fmt("%.0f", W) +
               "\" height=\"" + fmt("%.0f", H) + "\" fill=\"none\" stroke=\"#999\"/>\n";
        if (lo < 0 && hi > 0)
            svg += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.2f", ypix(0)) + "\" x2=\"" +
                   fmt("%.1f", left + W) + "\" y2=\"" + fmt("%.2f", ypix(0)) + "\" stroke=\"#ccc\"/>\n";
        for (int i = 0; i < R; ++i) {
            const char* c = kLineColours[i % 8];
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\" points=\"";
            for (int s = 0; s <= 100; ++s)
                svg += (s ? " " : "") + fmt("%.2f", left + u[s] * W) + "," + fmt("%.2f", ypix(curves[i](s)));
            svg += "\"/>\n";
            for (int b = 0; b < sb.observed.cols(); ++b)
                svg += "<circle cx=\"" + fmt("%.2f", left + sb.u(b) * W) + "\" cy=\"" +
                       fmt("%.2f", ypix(sb.observed(i, b))) + "\" r=\"2\" fill=\"" + c + "\"/>\n";
            svg += "<text x=\"" + fmt("%.1f", left + W + 10) + "\" y=\"" + fmt("%.1f", y0 + 14 + 14 * i) +
                   "\" fill=\"" + c + "\">grid point " + std::to_string(i + 1) + "</text>\n";
        }
        svg += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", y0 + 10) + "\" text-anchor=\"end\">" +
               fmt("%.3g", hi) + "</text>\n<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", y0 + H) +
               "\" text-anchor=\"end\">" + fmt("%.3g", lo) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw io_error("write failure on '" + path.string() + "'");
}

}  // namespace fbands
