#pragma once

#include <span>
#include <vector>

#include "slf/adam.hpp"
#include "slf/rng.hpp"

namespace slf::test {

inline std::vector<double> flatten(const ParamRefs& refs) {
  std::vector<double> flat;
  flat.reserve(total_len(refs));
  for (const ParamRef& r : refs) {
    flat.insert(flat.end(), r.data, r.data + r.len());
  }
  return flat;
}

inline void unflatten(std::span<const double> flat, const ParamRefs& refs) {
  std::size_t offset = 0;
  for (const ParamRef& r : refs) {
    for (std::size_t i = 0; i < r.len(); ++i) r.data[i] = flat[offset + i];
    offset += r.len();
  }
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace slf::test
