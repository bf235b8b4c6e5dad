#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "slf/error.hpp"

namespace slf {

// Dense row-major matrix of 64-bit floats. All network weights live in these.
struct Array2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Array2D() = default;
  Array2D(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::size_t size() const { return data.size(); }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

// Four-accumulator dot product: deterministic summation order, still gives the
// compiler room to vectorize.
inline double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

// y = W x
void matvec(const Array2D& w, const double* x, double* y);
// y += W x
void matvec_acc(const Array2D& w, const double* x, double* y);
// y += W^T x
void matvec_t_acc(const Array2D& w, const double* x, double* y);
// W += a b^T
void outer_acc(Array2D& w, const double* a, const double* b);

bool all_finite(std::span<const double> v);

void check_finite(std::span<const double> v, const char* what);

}  // namespace slf
