#pragma once

#include <vector>

#include "slf/array.hpp"

namespace slf {

// VARMA(p,q) over k parallel series, estimated by two-stage Hannan-Rissanen
// least squares. Closed form, no randomness.
//
// The stage-1 long VAR is kept with the model: innovations at forecast time
// are estimated exactly the way stage 2 saw them, as one-step errors of the
// long VAR. Feeding the model's own MA recursion back on itself instead is
// unstable whenever least squares lands on a non-invertible MA polynomial.
struct VarmaModel {
  std::size_t p = 0;  // AR order
  std::size_t q = 0;  // MA order
  std::size_t k = 0;  // series count
  std::vector<double> intercept;              // k
  std::vector<Array2D> ar_coeffs;             // p matrices, k x k
  std::vector<Array2D> ma_coeffs;             // q matrices, k x k
  std::vector<std::vector<double>> residual_history;  // last q residuals, oldest first
  double spectral_radius = 0.0;  // of the AR companion matrix, power-iteration estimate

  std::size_t long_order = 0;           // h = max(p,q) + 5
  std::vector<double> long_intercept;   // k
  std::vector<Array2D> long_ar;         // h matrices, k x k

  // Innovation proxies over a window: long-VAR one-step errors, zero where
  // fewer than long_order lags exist.
  Array2D residual_proxies(const Array2D& series) const;
};

struct VarFit {
  std::vector<double> intercept;   // k
  std::vector<Array2D> coeffs;     // order matrices, k x k
  Array2D residuals;               // (T - order) x k, residual at t = order..T-1
};

// Least squares for x_t = c + sum A_i x_{t-i} + e_t via normal equations with
// a 1e-8 ridge jitter. Declares singularity when the Cholesky-based condition
// estimate of the jittered system exceeds 1e12.
VarFit fit_var_ols(const Array2D& series, std::size_t order);

// Stage 1 fits a long VAR(max(p,q)+5) to proxy the residuals, stage 2
// regresses on p lagged values and q lagged residuals jointly.
VarmaModel hannan_rissanen_fit(const Array2D& series, std::size_t p,
                               std::size_t q);

// Recursive forecasts. recent must hold at least p rows; when it holds more,
// residuals are reconstructed over it by one-step prediction (zeros before
// enough lags exist); with exactly p rows the residual history stored at fit
// time is used. Future residuals are zero; forecasts feed back as
// pseudo-observations.
Array2D varma_forecast(const VarmaModel& model, const Array2D& recent,
                       std::size_t horizon);

}  // namespace slf
