#pragma once

#include <string>
#include <vector>

#include "slf/timeseries.hpp"
#include "slf/window.hpp"

namespace slf {

struct PreprocessConfig {
  int resample_minutes = 10;
  std::size_t input_steps = 144;   // 24 h at 10-minute bins
  std::size_t horizon_steps = 6;   // one hour ahead
  std::size_t stride = 6;
  double train_ratio = 0.7;
  double val_ratio = 0.2;
  double test_ratio = 0.1;

  std::size_t window_rows() const { return input_steps + horizon_steps; }
  void validate() const;
};

// Replaces every absent interior reading by the linear interpolant between
// its nearest present neighbours (in timestamp space); leading and trailing
// gaps take the nearest present value. Idempotent.
TimeSeriesTable interpolate_missing(const TimeSeriesTable& table);

// Means over T-minute bins anchored at UTC midnight. Input must be gap-free;
// empty bins come back absent so the caller can re-interpolate.
TimeSeriesTable resample_mean(const TimeSeriesTable& table, int minutes);

// Per-appliance min/max fitted on the training split only.
struct NormalizerStats {
  std::vector<std::string> appliances;
  std::vector<double> min_watts;
  std::vector<double> max_watts;

  std::size_t index_of(const std::string& name) const;  // throws Mismatch
};

NormalizerStats fit_normalizer(const TimeSeriesTable& train_split);

inline double normalize_value(double x, double mn, double mx) {
  return (x - mn) / (mx - mn);
}
inline double denormalize_value(double u, double mn, double mx) {
  return mn + u * (mx - mn);
}

// Sidecar text table "appliance,min,max", one row per appliance.
void write_normalizer_stats(const NormalizerStats& stats, const std::string& path);
NormalizerStats read_normalizer_stats(const std::string& path);

struct SplitTables {
  TimeSeriesTable train;
  TimeSeriesTable validation;
  TimeSeriesTable test;
};

// Contiguous chronological segments: boundaries at floor(ratio * rows), the
// last segment takes the remainder. Each segment must hold at least min_rows.
SplitTables chronological_split(const TimeSeriesTable& table, double train_ratio,
                                double val_ratio, double test_ratio,
                                std::size_t min_rows);

// Cuts supervised windows for one appliance from a gap-free resampled split.
// Per-step features: [normalized power, day-of-week one-hot(7)]; F = 8.
std::vector<Window> make_windows(const TimeSeriesTable& split,
                                 std::size_t appliance_idx,
                                 const NormalizerStats& stats,
                                 const PreprocessConfig& config,
                                 const std::string& building_id);

}  // namespace slf
