#include "fbands/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fbands/error.hpp"

namespace fbands {

using json = nlohmann::ordered_json;

std::string coupling_name(FrequencyCoupling c) {
    switch (c) {
        case FrequencyCoupling::Verbatim: return "verbatim";
        case FrequencyCoupling::Diagonal: return "diagonal";
        case FrequencyCoupling::TaperOverlap: return "taper-overlap";
    }
    return "unknown";
}

FrequencyCoupling parse_coupling(const std::string& s) {
    if (s == "verbatim") return FrequencyCoupling::Verbatim;
    if (s == "diagonal") return FrequencyCoupling::Diagonal;
    if (s == "taper-overlap") return FrequencyCoupling::TaperOverlap;
    throw config_error("unknown frequency coupling '" + s + "'");
}

std::string form_name(CovarianceForm f) { return f == CovarianceForm::Complex ? "complex" : "real-part"; }

CovarianceForm parse_form(const std::string& s) {
    if (s == "complex") return CovarianceForm::Complex;
    if (s == "real-part") return CovarianceForm::RealPart;
    throw config_error("unknown covariance form '" + s + "'");
}

std::string variant_name(FKernelVariant v) { return v == FKernelVariant::Printed ? "printed" : "symmetric"; }

FKernelVariant parse_variant(const std::string& s) {
    if (s == "printed") return FKernelVariant::Printed;
    if (s == "symmetric") return FKernelVariant::Symmetric;
    throw config_error("unknown F kernel variant '" + s + "'");
}

namespace {

json config_json(const AnalysisConfig& c) {
    json j;
    j["B"] = c.B;
    j["tapers"] = c.tapers ? json(*c.tapers) : json(nullptr);
    j["bandwidth"] = c.bandwidth;
    j["alpha"] = c.alpha;
    j["n_max"] = c.n_max;
    j["d0"] = c.d0;
    j["r_test"] = c.r_test;
    j["seed"] = c.seed;
    j["block_diagonal"] = c.block_diagonal;
    j["decimation"] = c.decimation;
    j["antialias"] = c.antialias;
    j["center"] = c.center;
    j["null_model"] = {{"coupling", coupling_name(c.null_model.coupling)},
                       {"form", form_name(c.null_model.form)},
                       {"variant", variant_name(c.null_model.variant)}};
    return j;
}

AnalysisConfig config_from(const json& j) {
    AnalysisConfig c;
    c.B = j.at("B").get<int>();
    if (!j.at("tapers").is_null()) c.tapers = j.at("tapers").get<int>();
    c.bandwidth = j.at("bandwidth").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.n_max = j.at("n_max").get<int>();
    c.d0 = j.at("d0").get<int>();
    c.r_test = j.at("r_test").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.block_diagonal = j.at("block_diagonal").get<bool>();
    c.decimation = j.at("decimation").get<int>();
    c.antialias = j.at("antialias").get<bool>();
    c.center = j.at("center").get<bool>();
    const auto& m = j.at("null_model");
    c.null_model.coupling = parse_coupling(m.at("coupling").get<std::string>());
    c.null_model.form = parse_form(m.at("form").get<std::string>());
    c.null_model.variant = parse_variant(m.at("variant").get<std::string>());
    return c;
}

json input_json(const InputSummary& in) {
    json j;
    j["source"] = in.source;
    j["raw_rows"] = in.raw_rows;
    j["T"] = in.T;
    j["R"] = in.R;
    j["effective_T"] = in.effective_T;
    j["truncated"] = in.truncated;
    j["decimation"] = in.decimation;
    j["sample_rate_hz"] = in.sample_rate_hz ? json(*in.sample_rate_hz) : json(nullptr);
    j["grid"] = in.grid;
    j["notes"] = in.notes;
    return j;
}

InputSummary input_from(const json& j) {
    InputSummary in;
    in.source = j.at("source").get<std::string>();
    in.raw_rows = j.at("raw_rows").get<int>();
    in.T = j.at("T").get<int>();
    in.R = j.at("R").get<int>();
    in.effective_T = j.at("effective_T").get<int>();
    in.truncated = j.at("truncated").get<int>();
    in.decimation = j.at("decimation").get<int>();
    if (!j.at("sample_rate_hz").is_null()) in.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    in.grid = j.at("grid").get<std::vector<double>>();
    in.notes = j.at("notes").get<std::vector<std::string>>();
    return in;
}

json pass_json(const SearchPass& p) {
    json j;
    j["start_index"] = p.start_index;
    j["omega0"] = p.omega0;
    j["widths"] = p.widths;
    j["targets"] = p.targets;
    j["statistics"] = p.statistics;
    j["pvalues"] = p.pvalues;
    j["rejected"] = p.rejected;
    j["action"] = p.action;
    j["cut"] = p.cut;
    return j;
}

SearchPass pass_from(const json& j) {
    SearchPass p;
    p.start_index = j.at("start_index").get<int>();
    p.omega0 = j.at("omega0").get<double>();
    p.widths = j.at("widths").get<std::vector<int>>();
    p.targets = j.at("targets").get<std::vector<double>>();
    p.statistics = j.at("statistics").get<std::vector<double>>();
    p.pvalues = j.at("pvalues").get<std::vector<double>>();
    p.rejected = j.at("rejected").get<std::vector<int>>();
    p.action = j.at("action").get<std::string>();
    p.cut = j.at("cut").get<double>();
    return p;
}

json stationarity_json(const StationarityResult& s) {
    json j;
    j["omega1"] = s.omega1;
    j["omega2"] = s.omega2;
    j["Q0"] = s.Q0;
    j["scaled"] = s.scaled;
    j["pvalue"] = s.pvalue;
    j["reject"] = s.reject;
    j["null_frequencies"] = s.null_frequencies;
    return j;
}

StationarityResult stationarity_from(const json& j) {
    StationarityResult s;
    s.omega1 = j.at("omega1").get<double>();
    s.omega2 = j.at("omega2").get<double>();
    s.Q0 = j.at("Q0").get<double>();
    s.scaled = j.at("scaled").get<double>();
    s.pvalue = j.at("pvalue").get<double>();
    s.reject = j.at("reject").get<bool>();
    s.null_frequencies = j.at("null_frequencies").get<std::vector<int>>();
    return s;
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
    json j;
    j["schema_version"] = AnalysisReport::schema_version;
    j["config"] = config_json(r.config);
    j["input"] = input_json(r.input);
    j["spectrum"] = {{"block_length", r.block_length}, {"frequencies", r.frequencies}, {"tapers", r.tapers}};
    j["test_grid"] = r.test_grid;
    j["partition"] = {{"bands", r.partition.bands()}, {"cuts", r.partition.cuts}};
    json passes = json::array();
    for (const auto& p : r.trace.passes) passes.push_back(pass_json(p));
    j["trace"] = {{"epsilon", r.trace.epsilon}, {"stop_reason", r.trace.stop_reason}, {"passes", passes}};
    json st = json::array();
    for (const auto& s : r.stationarity) st.push_back(stationarity_json(s));
    j["stationarity"] = st;
    json timings = json::object();
    for (const auto& [k, v] : r.timings) timings[k] = v;
    j["timings"] = timings;
    return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const int version = j.at("schema_version").get<int>();
        if (version != AnalysisReport::schema_version)
            throw parse_error("unsupported report schema_version " + std::to_string(version));
        AnalysisReport r;
        r.config = config_from(j.at("config"));
        r.input = input_from(j.at("input"));
        const auto& sp = j.at("spectrum");
        r.block_length = sp.at("block_length").get<int>();
        r.frequencies = sp.at("frequencies").get<int>();
        r.tapers = sp.at("tapers").get<int>();
        r.test_grid = j.at("test_grid").get<std::vector<int>>();
        r.partition.cuts = j.at("partition").at("cuts").get<std::vector<double>>();
        const auto& tr = j.at("trace");
        r.trace.epsilon = tr.at("epsilon").get<double>();
        r.trace.stop_reason = tr.at("stop_reason").get<std::string>();
        for (const auto& p : tr.at("passes")) r.trace.passes.push_back(pass_from(p));
        for (const auto& s : j.at("stationarity")) r.stationarity.push_back(stationarity_from(s));
        for (const auto& [k, v] : j.at("timings").items()) r.timings[k] = v.get<double>();
        return r;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed report: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw parse_error(std::string("malformed report: ") + e.what());
        throw;
    }
}

void write_report(const std::filesystem::path& path, const AnalysisReport& report) {
    const std::string text = report_to_json(report);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw io_error("write failure on '" + path.string() + "'");
}

AnalysisReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

}  // namespace fbands
