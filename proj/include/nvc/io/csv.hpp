#pragma once

// Two-column field records: time_s, field_T.

#include "nvc/timeseries.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nvc::io {

/// Allowed relative deviation of any time step from the mean step.
inline constexpr double spacing_tolerance = 1e-6;

/// Parse a CSV record. A header line is optional; blank lines and lines starting
/// with '#' are skipped. Throws DataError naming the 1-based line on malformed
/// rows, non-increasing time or spacing outside spacing_tolerance.
TimeSeries read_timeseries(std::istream& in, const std::string& source = "<stream>");
TimeSeries load_timeseries(const std::string& path);

/// Header `time_s,field_T`, values in shortest round-trip form.
void write_timeseries(std::ostream& out, const TimeSeries& series);
void save_timeseries(const TimeSeries& series, const std::string& path);

/// Numeric columns of a CSV file with a header row. Used by `nvc fit`.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
Table load_table(const std::string& path);

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

} // namespace nvc::io
