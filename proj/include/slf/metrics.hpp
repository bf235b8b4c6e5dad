#pragma once

#include <span>
#include <string>
#include <vector>

namespace slf {

// One row of the evaluation table, in denormalized watt units.
struct MetricReport {
  std::string building;
  std::string appliance;
  std::string model;
  double rmse = 0.0;
  double nrmse = 0.0;
  double mae = 0.0;
  std::size_t sample_count = 0;
};

double rmse(std::span<const double> pred, std::span<const double> target);
double mae(std::span<const double> pred, std::span<const double> target);

// RMSE divided by the appliance's recorded range over the full dataset.
double nrmse(std::span<const double> pred, std::span<const double> target,
             double range_min, double range_max);

// CSV: building,appliance,model,rmse,nrmse,mae,samples
void write_metric_reports(const std::vector<MetricReport>& reports,
                          const std::string& path);
std::vector<MetricReport> read_metric_reports(const std::string& path);

}  // namespace slf
