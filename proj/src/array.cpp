#include "slf/array.hpp"

#include <string>

namespace slf {

namespace {

// The kernels below carry most of the training flops. noinline keeps them
// out of the branchy outer loops so the vectorizer sees a plain stream loop.
[[gnu::noinline]] void axpy(double a, const double* __restrict__ x,
                            double* __restrict__ y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] += a * x[j];
}

[[gnu::noinline]] double dot_kernel(const double* __restrict__ a,
                                    const double* __restrict__ b,
                                    std::size_t n) {
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

}  // namespace

void matvec(const Array2D& w, const double* x, double* y) {
  for (std::size_t i = 0; i < w.rows; ++i) y[i] = dot_kernel(w.row(i), x, w.cols);
}

void matvec_acc(const Array2D& w, const double* x, double* y) {
  for (std::size_t i = 0; i < w.rows; ++i) y[i] += dot_kernel(w.row(i), x, w.cols);
}

void matvec_t_acc(const Array2D& w, const double* x, double* y) {
  // y_j += sum_i w_ij x_i, walked row-wise to stay sequential in memory.
  for (std::size_t i = 0; i < w.rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    axpy(xi, w.row(i), y, w.cols);
  }
}

void outer_acc(Array2D& w, const double* a, const double* b) {
  for (std::size_t i = 0; i < w.rows; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    axpy(ai, b, w.row(i), w.cols);
  }
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void check_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) {
    fail(Status::InvalidArgument, std::string(what) + ": non-finite value");
  }
}

}  // namespace slf
