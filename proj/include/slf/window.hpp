#pragma once

#include <string>
#include <vector>

#include "slf/array.hpp"

namespace slf {

// One supervised sample: 24 h of features in, one hour of targets out.
// Column 0 of inputs is the normalized power channel; the remaining columns
// are the day-of-week one-hot. reversed_target is exactly that power channel
// reversed (most recent step first).
struct Window {
  Array2D inputs;                       // n x F
  std::vector<double> reversed_target;  // n
  std::vector<double> forecast_target;  // m
  std::size_t appliance_label = 0;
  std::string building_id;
  std::string appliance_name;

  std::size_t steps() const { return inputs.rows; }
  double last_observed_power() const {
    return inputs.at(inputs.rows - 1, 0);
  }
};

}  // namespace slf
