#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fbands/inchworm.hpp"
#include "fbands/pipeline.hpp"

namespace fbands {

/// One heatmap panel per grid point: log10 autospectrum f(tau_i, tau_i) over
/// frequency (x) and time block (y), with vertical lines at the band cuts.
/// Frequencies are labelled in Hz when a sample rate is given.
std::string autospectrum_svg(const SpectralEstimate& S, const BandPartition& partition,
                             std::optional<double> sample_rate_hz = std::nullopt);

/// One panel per band: smoothed band-averaged diagonal g over rescaled time for every grid point.
std::string smoothed_g_svg(const std::vector<SmoothedBand>& bands, std::optional<double> sample_rate_hz = std::nullopt);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fbands
