#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slf {

// Timestamped per-appliance power readings in watts. Gaps are quiet NaN.
// Timestamps are unix seconds, UTC, strictly increasing.
struct TimeSeriesTable {
  std::vector<std::int64_t> timestamps;
  std::vector<std::string> appliances;
  std::vector<std::vector<double>> columns;  // [appliance][row]

  std::size_t rows() const { return timestamps.size(); }
  std::size_t cols() const { return appliances.size(); }

  std::size_t appliance_index(const std::string& name) const;  // throws Mismatch

  // Keeps only the named appliance columns, in the given order.
  TimeSeriesTable select(const std::vector<std::string>& names) const;
};

bool is_absent(double v);
double absent();

// ISO-8601 UTC, e.g. 2014-01-15T00:00:00Z. No locale, no timezone lookup.
std::int64_t parse_timestamp(const std::string& s);
std::string format_timestamp(std::int64_t ts);

// 0 = Monday .. 6 = Sunday.
int utc_weekday(std::int64_t ts);

// CSV schema: header "timestamp,<appliance>,...", ISO-8601 UTC timestamps,
// watts as decimal floats, empty field = missing. Rejects malformed rows
// (parse error with line number), non-monotonic timestamps and negative
// readings (schema error).
TimeSeriesTable parse_csv(const std::string& path);

void write_csv(const TimeSeriesTable& table, const std::string& path);

}  // namespace slf
