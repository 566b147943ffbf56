#include "nvc/io/csv.hpp"

#include "nvc/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace nvc::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) {
        cells.push_back(trim(c));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    const char* first = s.data();
    if (*first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_skippable(const std::string& line) {
    return line.empty() || line.front() == '#';
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

TimeSeries read_timeseries(std::istream& in, const std::string& source) {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::size_t> lines;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_first = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (is_skippable(line)) {
            continue;
        }
        const auto cells = split(line);
        double t = 0.0;
        double b = 0.0;
        const bool numeric = cells.size() == 2 && parse_number(cells[0], t) && parse_number(cells[1], b);
        if (!seen_first) {
            seen_first = true;
            if (!numeric) {
                if (cells.size() != 2) {
                    throw DataError(source + ":" + std::to_string(line_no) +
                                        ": expected two columns (time_s, field_T)",
                                    line_no);
                }
                continue; // header
            }
        }
        if (!numeric) {
            throw DataError(source + ":" + std::to_string(line_no) +
                                ": expected two numeric columns, got '" + line + "'",
                            line_no);
        }
        if (!times.empty() && !(t > times.back())) {
            throw DataError(source + ":" + std::to_string(line_no) +
                                ": time is not strictly increasing (" + format_double(t) +
                                " after " + format_double(times.back()) + ")",
                            line_no);
        }
        times.push_back(t);
        values.push_back(b);
        lines.push_back(line_no);
    }
    if (times.size() < 2) {
        throw DataError(source + ": at least two samples are required");
    }
    const double mean_step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        // Absolute slack covers the rounding of the printed time stamps themselves.
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(times[i]), std::abs(times[i - 1]));
        if (std::abs(step - mean_step) > spacing_tolerance * mean_step + slack) {
            throw DataError(source + ":" + std::to_string(lines[i]) +
                                ": non-uniform sample spacing (" + format_double(step) +
                                " s vs mean " + format_double(mean_step) + " s)",
                            lines[i]);
        }
    }
    // Snap the inferred rate to 12 significant digits so a written record reads back
    // with the exact rate it was generated at.
    double rate = 1.0 / mean_step;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", rate);
    rate = std::strtod(buf, nullptr);
    return {rate, times.front(), std::move(values)};
}

TimeSeries load_timeseries(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return read_timeseries(in, path);
}

void write_timeseries(std::ostream& out, const TimeSeries& series) {
    validate(series, false);
    out << "time_s,field_T\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_double(series.time_at(i)) << ',' << format_double(series.samples[i]) << '\n';
    }
}

void save_timeseries(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    write_timeseries(out, series);
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

Table load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    Table table;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (is_skippable(line)) {
            continue;
        }
        const auto cells = split(line);
        if (table.columns.empty()) {
            table.columns = cells;
            continue;
        }
        if (cells.size() != table.columns.size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(table.columns.size()) + " columns",
                            line_no);
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_number(cells[c], row[c])) {
                throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric value '" +
                                    cells[c] + "'",
                                line_no);
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw DataError(path + ": empty table");
    }
    return table;
}

} // namespace nvc::io
