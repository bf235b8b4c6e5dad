#include "slf/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "slf/error.hpp"

namespace slf {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> target,
                const char* what) {
  require(!pred.empty(), Status::InvalidArgument,
          std::string(what) + ": empty input");
  require(pred.size() == target.size(), Status::InvalidArgument,
          std::string(what) + ": length mismatch");
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred, target, "rmse");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> target) {
  check_pair(pred, target, "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    acc += std::abs(pred[i] - target[i]);
  }
  return acc / static_cast<double>(pred.size());
}

double nrmse(std::span<const double> pred, std::span<const double> target,
             double range_min, double range_max) {
  if (!(range_max > range_min)) {
    fail(Status::DegenerateScale, "nrmse: appliance range is empty");
  }
  return rmse(pred, target) / (range_max - range_min);
}

void write_metric_reports(const std::vector<MetricReport>& reports,
                          const std::string& path) {
  std::string out = "building,appliance,model,rmse,nrmse,mae,samples\n";
  for (const MetricReport& r : reports) {
    out += r.building;
    out += ',';
    out += r.appliance;
    out += ',';
    out += r.model;
    out += ',';
    append_double(out, r.rmse);
    out += ',';
    append_double(out, r.nrmse);
    out += ',';
    append_double(out, r.mae);
    out += ',';
    out += std::to_string(r.sample_count);
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot write " + path);
  f << out;
}

std::vector<MetricReport> read_metric_reports(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Status::Io, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "building,appliance,model,rmse,nrmse,mae,samples",
          Status::Format, path + ": not a metric report (bad header)");
  std::vector<MetricReport> reports;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    require(fields.size() == 7, Status::Format,
            path + ":" + std::to_string(line_no) + ": expected 7 fields");
    MetricReport r;
    r.building = fields[0];
    r.appliance = fields[1];
    r.model = fields[2];
    try {
      r.rmse = std::stod(fields[3]);
      r.nrmse = std::stod(fields[4]);
      r.mae = std::stod(fields[5]);
      r.sample_count = static_cast<std::size_t>(std::stoull(fields[6]));
    } catch (const std::exception&) {
      fail(Status::Format,
           path + ":" + std::to_string(line_no) + ": bad numeric field");
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace slf
