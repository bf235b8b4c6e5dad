#include "slf/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "slf/error.hpp"

namespace slf {

std::size_t TimeSeriesTable::appliance_index(const std::string& name) const {
  for (std::size_t i = 0; i < appliances.size(); ++i) {
    if (appliances[i] == name) return i;
  }
  fail(Status::Mismatch, "appliance not present in table: " + name);
}

TimeSeriesTable TimeSeriesTable::select(
    const std::vector<std::string>& names) const {
  TimeSeriesTable out;
  out.timestamps = timestamps;
  for (const std::string& name : names) {
    out.appliances.push_back(name);
    out.columns.push_back(columns[appliance_index(name)]);
  }
  return out;
}

bool is_absent(double v) { return std::isnan(v); }

double absent() { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool parse_int_field(const char* s, int len, int& out) {
  auto [ptr, ec] = std::from_chars(s, s + len, out);
  return ec == std::errc() && ptr == s + len;
}

// Shortest round-trip formatting, locale-free.
void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::int64_t parse_timestamp(const std::string& s) {
  // 2014-01-15T00:00:00Z
  int y, mo, d, h, mi, sec;
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' ||
      s[13] != ':' || s[16] != ':' || s[19] != 'Z' ||
      !parse_int_field(s.data(), 4, y) || !parse_int_field(s.data() + 5, 2, mo) ||
      !parse_int_field(s.data() + 8, 2, d) ||
      !parse_int_field(s.data() + 11, 2, h) ||
      !parse_int_field(s.data() + 14, 2, mi) ||
      !parse_int_field(s.data() + 17, 2, sec)) {
    fail(Status::Parse, "bad timestamp (want ISO-8601 UTC like "
                        "2014-01-15T00:00:00Z): " + s);
  }
  require(mo >= 1 && mo <= 12 && d >= 1 && d <= 31 && h <= 23 && mi <= 59 &&
              sec <= 59,
          Status::Parse, "timestamp field out of range: " + s);
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_timestamp(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  std::int64_t rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

int utc_weekday(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  if (ts % 86400 < 0) days -= 1;
  // 1970-01-01 was a Thursday; shift so Monday = 0.
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

TimeSeriesTable parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Status::Io, "cannot open " + path);

  TimeSeriesTable table;
  std::string line;
  std::size_t line_no = 0;

  auto split = [](const std::string& l) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = l.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(l.substr(start));
        break;
      }
      fields.push_back(l.substr(start, comma - start));
      start = comma + 1;
    }
    return fields;
  };

  if (!std::getline(in, line)) fail(Status::Parse, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_no;
  std::vector<std::string> header = split(line);
  require(header.size() >= 2 && header[0] == "timestamp", Status::Schema,
          path + ": header must start with 'timestamp' and name appliances");
  for (std::size_t i = 1; i < header.size(); ++i) {
    require(!header[i].empty(), Status::Schema, path + ": empty appliance name");
    for (const std::string& seen : table.appliances) {
      require(seen != header[i], Status::Schema,
              path + ": duplicate appliance column " + header[i]);
    }
    table.appliances.push_back(header[i]);
  }
  table.columns.assign(table.appliances.size(), {});

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      fail(Status::Parse, path + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(fields.size()));
    }
    std::int64_t ts;
    try {
      ts = parse_timestamp(fields[0]);
    } catch (const Error& e) {
      fail(Status::Parse,
           path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!table.timestamps.empty() && ts <= table.timestamps.back()) {
      fail(Status::Schema, path + ":" + std::to_string(line_no) +
                               ": timestamps must be strictly increasing");
    }
    table.timestamps.push_back(ts);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      if (f.empty()) {
        table.columns[i - 1].push_back(absent());
        continue;
      }
      double v;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        fail(Status::Parse, path + ":" + std::to_string(line_no) +
                                ": bad number '" + f + "'");
      }
      if (!(v >= 0.0) || !std::isfinite(v)) {
        fail(Status::Schema, path + ":" + std::to_string(line_no) +
                                 ": readings must be finite and >= 0");
      }
      table.columns[i - 1].push_back(v);
    }
  }
  return table;
}

void write_csv(const TimeSeriesTable& table, const std::string& path) {
  std::string out = "timestamp";
  for (const std::string& name : table.appliances) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += format_timestamp(table.timestamps[r]);
    for (std::size_t c = 0; c < table.cols(); ++c) {
      out += ',';
      const double v = table.columns[c][r];
      if (!is_absent(v)) append_double(out, v);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(Status::Io, "write failed for " + path);
}

}  // namespace slf
