#include "fbands/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbands/error.hpp"

namespace fbands {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    if (options.decimation < 1) throw config_error("decimation factor must be >= 1");
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path.string() + "'");

    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (first) {
            first = false;
            width = cells.size();
            bool numeric = true;
            for (auto c : cells) numeric = numeric && parse_number(c).has_value();
            if (!numeric) {
                for (auto c : cells) labels.emplace_back(c);
                continue;
            }
        }
        if (cells.size() != width)
            throw parse_error(path.string() + ": ragged row at line " + std::to_string(lineno) + ": " +
                              std::to_string(cells.size()) + " columns, expected " + std::to_string(width));
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            const auto v = parse_number(cells[j]);
            if (!v)
                throw parse_error(path.string() + ": non-numeric cell at line " + std::to_string(lineno) +
                                  ", column " + std::to_string(j + 1) + ": '" + std::string(cells[j]) + "'");
            if (!std::isfinite(*v))
                throw numeric_error(path.string() + ": non-finite value at line " + std::to_string(lineno) +
                                    ", column " + std::to_string(j + 1));
            row[j] = *v;
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw io_error("read failure on '" + path.string() + "'");

    const int d = options.decimation;
    const int raw = static_cast<int>(rows.size());
    const int kept = (raw + d - 1) / d;
    if (kept < 2)
        throw parse_error(path.string() + ": fewer than 2 usable rows (" + std::to_string(raw) + " data rows, decimation " +
                          std::to_string(d) + ")");

    RowMatrix values(kept, static_cast<Eigen::Index>(width));
    for (int i = 0; i < kept; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            if (!options.antialias) {
                values(i, j) = rows[static_cast<std::size_t>(i) * d][j];
                continue;
            }
            const int end = std::min(raw, (i + 1) * d);
            double s = 0.0;
            for (int t = i * d; t < end; ++t) s += rows[t][j];
            values(i, j) = s / (end - i * d);
        }
    }

    std::vector<std::string> notes;
    if (options.center) {
        values.rowwise() -= values.colwise().mean();
        notes.push_back("columns centred");
    }
    if (d > 1)
        notes.push_back("decimated by " + std::to_string(d) + (options.antialias ? " with moving-average pre-filter" : "") +
                               ": " + std::to_string(raw) + " -> " + std::to_string(kept) + " rows");

    std::vector<double> grid;
    bool positional = !labels.empty();
    for (const auto& l : labels) {
        std::optional<double> v;
        if (l.rfind("tau=", 0) == 0) v = parse_number(std::string_view(l).substr(4));
        if (!v) positional = false;
        else grid.push_back(*v);
    }
    if (positional) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i] < 0.0 || grid[i] > 1.0 || (i > 0 && grid[i] <= grid[i - 1])) positional = false;
    }
    if (!positional) {
        grid = FunctionalTimeSeries::uniform_grid(static_cast<int>(width));
        if (!labels.empty()) notes.push_back("channel labels mapped to an equally spaced grid");
    }

    std::optional<double> rate = options.sample_rate_hz;
    if (rate) *rate /= d;
    return {FunctionalTimeSeries(std::move(values), std::move(grid), rate), raw, std::move(labels), std::move(notes)};
}

void write_csv(const std::filesystem::path& path, const FunctionalTimeSeries& X) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    std::string buf;
    for (int j = 0; j < X.grid_size(); ++j) {
        if (j) buf += ',';
        buf += "tau=" + format_double(X.grid()[j]);
    }
    buf += '\n';
    for (int t = 0; t < X.length(); ++t) {
        for (int j = 0; j < X.grid_size(); ++j) {
            if (j) buf += ',';
            buf += format_double(X.values()(t, j));
        }
        buf += '\n';
    }
    out << buf;
    if (!out) throw io_error("write failure on '" + path.string() + "'");
}

}  // namespace fbands
