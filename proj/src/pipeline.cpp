#include "slf/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "slf/error.hpp"

namespace slf {

void PreprocessConfig::validate() const {
  require(resample_minutes > 0 && 60 % resample_minutes == 0,
          Status::InvalidArgument, "resample_minutes must divide 60");
  require(input_steps >= 1 && horizon_steps >= 1 && stride >= 1,
          Status::InvalidArgument, "window geometry must be positive");
  const double sum = train_ratio + val_ratio + test_ratio;
  require(train_ratio > 0 && val_ratio > 0 && test_ratio > 0 &&
              std::abs(sum - 1.0) < 1e-9,
          Status::InvalidArgument, "split ratios must be positive and sum to 1");
}

TimeSeriesTable interpolate_missing(const TimeSeriesTable& table) {
  TimeSeriesTable out = table;
  for (std::size_t c = 0; c < out.cols(); ++c) {
    std::vector<double>& col = out.columns[c];
    std::vector<std::size_t> present;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (!is_absent(col[r])) present.push_back(r);
    }
    if (present.empty()) {
      fail(Status::InvalidArgument,
           "interpolate_missing: column " + out.appliances[c] + " is entirely absent");
    }
    require(present.size() >= 2, Status::InvalidArgument,
            "interpolate_missing: column " + out.appliances[c] +
                " needs at least 2 present readings");
    // leading / trailing gaps: nearest present value
    for (std::size_t r = 0; r < present.front(); ++r) col[r] = col[present.front()];
    for (std::size_t r = present.back() + 1; r < col.size(); ++r) {
      col[r] = col[present.back()];
    }
    // interior gaps: linear in timestamp space
    for (std::size_t seg = 0; seg + 1 < present.size(); ++seg) {
      const std::size_t a = present[seg];
      const std::size_t b = present[seg + 1];
      if (b == a + 1) continue;
      const double ta = static_cast<double>(out.timestamps[a]);
      const double tb = static_cast<double>(out.timestamps[b]);
      for (std::size_t r = a + 1; r < b; ++r) {
        const double w = (static_cast<double>(out.timestamps[r]) - ta) / (tb - ta);
        col[r] = col[a] + w * (col[b] - col[a]);
      }
    }
  }
  return out;
}

TimeSeriesTable resample_mean(const TimeSeriesTable& table, int minutes) {
  require(minutes > 0 && 60 % minutes == 0, Status::InvalidArgument,
          "resample interval must divide 60 minutes");
  require(table.rows() > 0, Status::InvalidArgument, "resample of empty table");
  for (std::size_t c = 0; c < table.cols(); ++c) {
    for (double v : table.columns[c]) {
      require(!is_absent(v), Status::InvalidArgument,
              "resample requires a gap-free table (interpolate first)");
    }
  }
  const std::int64_t bin_s = static_cast<std::int64_t>(minutes) * 60;
  // Bins aligned to UTC midnight: epoch is midnight-aligned and bin_s divides
  // a day, so flooring the timestamp is enough.
  auto bin_of = [bin_s](std::int64_t ts) {
    std::int64_t b = ts / bin_s;
    if (ts % bin_s < 0) b -= 1;
    return b;
  };
  const std::int64_t first_bin = bin_of(table.timestamps.front());
  const std::int64_t last_bin = bin_of(table.timestamps.back());
  const std::size_t nbins = static_cast<std::size_t>(last_bin - first_bin + 1);

  TimeSeriesTable out;
  out.appliances = table.appliances;
  out.timestamps.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    out.timestamps[b] = (first_bin + static_cast<std::int64_t>(b)) * bin_s;
  }
  out.columns.assign(table.cols(), std::vector<double>(nbins, absent()));

  std::vector<std::size_t> counts(nbins, 0);
  std::vector<double> sums(nbins, 0.0);
  for (std::size_t c = 0; c < table.cols(); ++c) {
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const std::size_t b =
          static_cast<std::size_t>(bin_of(table.timestamps[r]) - first_bin);
      sums[b] += table.columns[c][r];
      counts[b] += 1;
    }
    for (std::size_t b = 0; b < nbins; ++b) {
      if (counts[b] > 0) {
        out.columns[c][b] = sums[b] / static_cast<double>(counts[b]);
      }
    }
  }
  return out;
}

std::size_t NormalizerStats::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < appliances.size(); ++i) {
    if (appliances[i] == name) return i;
  }
  fail(Status::Mismatch, "no normalizer stats for appliance: " + name);
}

NormalizerStats fit_normalizer(const TimeSeriesTable& train_split) {
  require(train_split.rows() > 0, Status::InvalidArgument,
          "fit_normalizer: empty training split");
  NormalizerStats stats;
  stats.appliances = train_split.appliances;
  for (std::size_t c = 0; c < train_split.cols(); ++c) {
    double mn = train_split.columns[c][0];
    double mx = mn;
    for (double v : train_split.columns[c]) {
      require(!is_absent(v), Status::InvalidArgument,
              "fit_normalizer: gaps present, interpolate first");
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (!(mx > mn)) {
      fail(Status::DegenerateScale,
           "appliance " + train_split.appliances[c] +
               " is constant over the training split (min == max == " +
               std::to_string(mn) + ")");
    }
    stats.min_watts.push_back(mn);
    stats.max_watts.push_back(mx);
  }
  return stats;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

void write_normalizer_stats(const NormalizerStats& stats,
                            const std::string& path) {
  std::string out = "appliance,min,max\n";
  for (std::size_t i = 0; i < stats.appliances.size(); ++i) {
    out += stats.appliances[i];
    out += ',';
    append_double(out, stats.min_watts[i]);
    out += ',';
    append_double(out, stats.max_watts[i]);
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot write " + path);
  f << out;
}

NormalizerStats read_normalizer_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Status::Io, "cannot open " + path);
  NormalizerStats stats;
  std::string line;
  std::getline(in, line);
  require(line.rfind("appliance,min,max", 0) == 0, Status::Format,
          path + ": bad normalizer header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    require(c1 != std::string::npos && c2 != std::string::npos, Status::Format,
            path + ": bad normalizer row: " + line);
    stats.appliances.push_back(line.substr(0, c1));
    stats.min_watts.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    stats.max_watts.push_back(std::stod(line.substr(c2 + 1)));
  }
  return stats;
}

SplitTables chronological_split(const TimeSeriesTable& table, double train_ratio,
                                double val_ratio, double test_ratio,
                                std::size_t min_rows) {
  const double sum = train_ratio + val_ratio + test_ratio;
  require(train_ratio > 0 && val_ratio > 0 && test_ratio > 0 &&
              std::abs(sum - 1.0) < 1e-9,
          Status::InvalidArgument, "split ratios must be positive and sum to 1");
  const std::size_t rows = table.rows();
  // the nudge keeps floor() faithful to exact rational ratios (0.7 * 5760
  // must be 4032, not 4031.999...)
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(train_ratio * static_cast<double>(rows) + 1e-9));
  const std::size_t n_val = static_cast<std::size_t>(
      std::floor(val_ratio * static_cast<double>(rows) + 1e-9));
  const std::size_t n_test = rows - n_train - n_val;

  auto slice = [&table](std::size_t start, std::size_t count) {
    TimeSeriesTable out;
    out.appliances = table.appliances;
    out.timestamps.assign(table.timestamps.begin() + start,
                          table.timestamps.begin() + start + count);
    for (const std::vector<double>& col : table.columns) {
      out.columns.emplace_back(col.begin() + start, col.begin() + start + count);
    }
    return out;
  };

  for (std::size_t count : {n_train, n_val, n_test}) {
    if (count < min_rows) {
      fail(Status::InsufficientData,
           "split segment of " + std::to_string(count) +
               " rows is smaller than the required " + std::to_string(min_rows));
    }
  }
  SplitTables out;
  out.train = slice(0, n_train);
  out.validation = slice(n_train, n_val);
  out.test = slice(n_train + n_val, n_test);
  return out;
}

std::vector<Window> make_windows(const TimeSeriesTable& split,
                                 std::size_t appliance_idx,
                                 const NormalizerStats& stats,
                                 const PreprocessConfig& config,
                                 const std::string& building_id) {
  config.validate();
  require(appliance_idx < split.cols(), Status::InvalidArgument,
          "make_windows: appliance index out of range");
  const std::size_t n = config.input_steps;
  const std::size_t m = config.horizon_steps;
  require(split.rows() >= n + m, Status::InsufficientData,
          "make_windows: split smaller than one window");

  const std::string& name = split.appliances[appliance_idx];
  const std::size_t stats_idx = stats.index_of(name);
  const double mn = stats.min_watts[stats_idx];
  const double mx = stats.max_watts[stats_idx];
  const std::vector<double>& col = split.columns[appliance_idx];

  std::vector<Window> windows;
  for (std::size_t start = 0; start + n + m <= split.rows();
       start += config.stride) {
    Window w;
    w.building_id = building_id;
    w.appliance_name = name;
    w.appliance_label = appliance_idx;
    w.inputs = Array2D(n, 8);
    w.reversed_target.resize(n);
    w.forecast_target.resize(m);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t r = start + t;
      require(!is_absent(col[r]), Status::InvalidArgument,
              "make_windows: gap in split data");
      const double u = normalize_value(col[r], mn, mx);
      w.inputs.at(t, 0) = u;
      w.inputs.at(t, 1 + utc_weekday(split.timestamps[r])) = 1.0;
      w.reversed_target[n - 1 - t] = u;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double v = col[start + n + j];
      require(!is_absent(v), Status::InvalidArgument,
              "make_windows: gap in split data");
      w.forecast_target[j] = normalize_value(v, mn, mx);
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace slf
