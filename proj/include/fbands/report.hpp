#pragma once

#include <filesystem>
#include <string>

#include "fbands/pipeline.hpp"

namespace fbands {

/// JSON text of a report: two-space indent, keys in a fixed order, doubles in
/// shortest round-trip form, so equal reports give byte-identical files.
std::string report_to_json(const AnalysisReport& report);

/// Parses report_to_json output; throws a parse error on malformed or
/// unsupported-version input.
AnalysisReport report_from_json(const std::string& text);

void write_report(const std::filesystem::path& path, const AnalysisReport& report);
AnalysisReport read_report(const std::filesystem::path& path);

std::string coupling_name(FrequencyCoupling c);
FrequencyCoupling parse_coupling(const std::string& s);
std::string form_name(CovarianceForm f);
CovarianceForm parse_form(const std::string& s);
std::string variant_name(FKernelVariant v);
FKernelVariant parse_variant(const std::string& s);

}  // namespace fbands
