#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fbands/core.hpp"

namespace fbands {

struct IngestOptions {
    int decimation = 1;        // keep every d-th row
    bool antialias = false;    // average each run of d rows instead of plain sample keeping
    bool center = false;       // remove each column's mean after decimation
    std::optional<double> sample_rate_hz;  // rate of the raw file; divided by d on output
};

struct IngestResult {
    FunctionalTimeSeries series;
    int raw_rows = 0;
    std::vector<std::string> labels;  // header labels, empty when the file has none
    std::vector<std::string> notes;
};

/// Reads a rectangular numeric CSV with rows as time. An optional first row of
/// labels is detected by the presence of a non-numeric cell; labels of the form
/// "tau=<x>" give grid positions, anything else maps columns to an equally spaced grid.
/// Non-finite values are rejected as numeric errors.
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options = {});

/// Writes the series with a "tau=<x>" header row; values use round-trip precision.
void write_csv(const std::filesystem::path& path, const FunctionalTimeSeries& X);

}  // namespace fbands
