#include "slf/varma.hpp"

#include <cmath>
#include <limits>

namespace slf {

namespace {

constexpr double kRidgeJitter = 1e-8;
constexpr double kConditionLimit = 1e12;

// Cholesky factorization in place (lower triangle).
void cholesky(Array2D& g) {
  const std::size_t d = g.rows;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = g.at(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= g.at(i, k) * g.at(j, k);
      if (i == j) {
        if (sum <= 0.0) {
          fail(Status::Singular, "varma: normal equations not positive definite");
        }
        g.at(i, i) = std::sqrt(sum);
      } else {
        g.at(i, j) = sum / g.at(j, j);
      }
    }
  }
}

// Spectral condition estimate of an SPD matrix: power iteration for the
// largest eigenvalue on g (symmetric part untouched by the factorization is
// not usable afterwards, so this runs before cholesky), inverse iteration
// through the factor for the smallest.
double spd_lambda_max(const Array2D& g) {
  const std::size_t d = g.rows;
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> gv(d);
  double lambda = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    for (std::size_t i = 0; i < d; ++i) gv[i] = dot(g.row(i), v.data(), d);
    double norm = 0.0;
    for (double x : gv) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lambda = norm;
    for (std::size_t i = 0; i < d; ++i) v[i] = gv[i] / norm;
  }
  return lambda;
}

void cholesky_solve(const Array2D& l, std::vector<double>& b);

double spd_lambda_min(const Array2D& chol_factor) {
  const std::size_t d = chol_factor.rows;
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double inv_norm = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<double> w = v;
    cholesky_solve(chol_factor, w);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0 || !std::isfinite(norm)) return 0.0;
    inv_norm = norm;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
  }
  return 1.0 / inv_norm;
}

void cholesky_solve(const Array2D& l, std::vector<double>& b) {
  const std::size_t d = l.rows;
  for (std::size_t i = 0; i < d; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l.at(i, k) * b[k];
    b[i] = sum / l.at(i, i);
  }
  for (std::size_t i = d; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < d; ++k) sum -= l.at(k, i) * b[k];
    b[i] = sum / l.at(i, i);
  }
}

// Least squares of y (rows x k) on x (rows x d) via jittered normal
// equations. Returns d x k coefficients.
Array2D solve_least_squares(const Array2D& x, const Array2D& y) {
  const std::size_t d = x.cols;
  const std::size_t k = y.cols;
  Array2D gram(d, d);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double* row = x.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = row[i];
      if (xi == 0.0) continue;
      double* grow = gram.row(i);
      for (std::size_t j = 0; j <= i; ++j) grow[j] += xi * row[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) gram.at(i, j) = gram.at(j, i);
    gram.at(i, i) += kRidgeJitter;
  }
  const double lambda_max = spd_lambda_max(gram);
  cholesky(gram);
  const double lambda_min = spd_lambda_min(gram);
  const double condition =
      lambda_min > 0.0 ? lambda_max / lambda_min
                       : std::numeric_limits<double>::infinity();
  if (!(condition < kConditionLimit)) {
    fail(Status::Singular,
         "varma: regressor matrix near-singular (condition estimate " +
             std::to_string(condition) + ")");
  }

  Array2D coeffs(d, k);
  std::vector<double> rhs(d);
  for (std::size_t col = 0; col < k; ++col) {
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double* row = x.row(r);
      const double yv = y.at(r, col);
      for (std::size_t i = 0; i < d; ++i) rhs[i] += row[i] * yv;
    }
    cholesky_solve(gram, rhs);
    for (std::size_t i = 0; i < d; ++i) coeffs.at(i, col) = rhs[i];
  }
  return coeffs;
}

// Dominant |eigenvalue| of the AR companion matrix by power iteration with a
// fixed start vector; geometric mean of the last growth factors.
double companion_spectral_radius(const std::vector<Array2D>& ar, std::size_t k) {
  const std::size_t p = ar.size();
  if (p == 0 || k == 0) return 0.0;
  const std::size_t d = p * k;
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> next(d);
  double radius = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    // top block row: sum_i A_i v_i ; identity shifts below
    for (std::size_t r = 0; r < k; ++r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        const double* arow = ar[i].row(r);
        for (std::size_t c = 0; c < k; ++c) acc += arow[c] * v[i * k + c];
      }
      next[r] = acc;
    }
    for (std::size_t r = k; r < d; ++r) next[r] = v[r - k];
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    radius = norm;
    for (std::size_t r = 0; r < d; ++r) v[r] = next[r] / norm;
  }
  return radius;
}

void validate_series(const Array2D& series) {
  require(series.cols >= 1, Status::InvalidArgument, "varma: empty series");
  check_finite(series.data, "varma series");
}

}  // namespace

VarFit fit_var_ols(const Array2D& series, std::size_t order) {
  validate_series(series);
  const std::size_t t_total = series.rows;
  const std::size_t k = series.cols;
  require(order >= 1, Status::InvalidArgument, "fit_var_ols: order must be >= 1");
  require(t_total > 10 * (order * k + 1), Status::InsufficientData,
          "fit_var_ols: need more than 10*(order*k+1) rows");

  const std::size_t rows = t_total - order;
  const std::size_t d = order * k + 1;
  Array2D x(rows, d);
  Array2D y(rows, k);
  for (std::size_t t = order; t < t_total; ++t) {
    const std::size_t r = t - order;
    x.at(r, 0) = 1.0;
    for (std::size_t lag = 1; lag <= order; ++lag) {
      const double* past = series.row(t - lag);
      for (std::size_t c = 0; c < k; ++c) {
        x.at(r, 1 + (lag - 1) * k + c) = past[c];
      }
    }
    for (std::size_t c = 0; c < k; ++c) y.at(r, c) = series.at(t, c);
  }

  const Array2D coeffs = solve_least_squares(x, y);

  VarFit fit;
  fit.intercept.resize(k);
  for (std::size_t c = 0; c < k; ++c) fit.intercept[c] = coeffs.at(0, c);
  fit.coeffs.assign(order, Array2D(k, k));
  for (std::size_t lag = 0; lag < order; ++lag) {
    for (std::size_t row = 0; row < k; ++row) {
      for (std::size_t col = 0; col < k; ++col) {
        // equation row = target series, col = lagged series
        fit.coeffs[lag].at(row, col) = coeffs.at(1 + lag * k + col, row);
      }
    }
  }
  fit.residuals = Array2D(rows, k);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      double pred = fit.intercept[c];
      for (std::size_t i = 1; i < d; ++i) pred += x.at(r, i) * coeffs.at(i, c);
      fit.residuals.at(r, c) = y.at(r, c) - pred;
    }
  }
  return fit;
}

VarmaModel hannan_rissanen_fit(const Array2D& series, std::size_t p,
                               std::size_t q) {
  validate_series(series);
  require(p + q >= 1, Status::InvalidArgument,
          "hannan_rissanen_fit: p + q must be >= 1");
  const std::size_t k = series.cols;
  const std::size_t t_total = series.rows;

  // Stage 1: long VAR to estimate the innovations.
  const std::size_t h = std::max(p, q) + 5;
  require(t_total > 10 * (h * k + 1), Status::InsufficientData,
          "hannan_rissanen_fit: series too short for the long VAR stage");
  const VarFit long_fit = fit_var_ols(series, h);
  // residual at absolute time t lives in long_fit.residuals row t - h

  // Stage 2: regress x_t on p lagged values and q lagged residuals.
  const std::size_t start = h + q;
  const std::size_t rows = t_total - start;
  const std::size_t d = 1 + p * k + q * k;
  require(rows > 10 * d, Status::InsufficientData,
          "hannan_rissanen_fit: series too short for the joint stage");
  Array2D x(rows, d);
  Array2D y(rows, k);
  for (std::size_t t = start; t < t_total; ++t) {
    const std::size_t r = t - start;
    x.at(r, 0) = 1.0;
    for (std::size_t lag = 1; lag <= p; ++lag) {
      const double* past = series.row(t - lag);
      for (std::size_t c = 0; c < k; ++c) x.at(r, 1 + (lag - 1) * k + c) = past[c];
    }
    for (std::size_t lag = 1; lag <= q; ++lag) {
      const double* res = long_fit.residuals.row(t - lag - h);
      for (std::size_t c = 0; c < k; ++c) {
        x.at(r, 1 + p * k + (lag - 1) * k + c) = res[c];
      }
    }
    for (std::size_t c = 0; c < k; ++c) y.at(r, c) = series.at(t, c);
  }

  const Array2D coeffs = solve_least_squares(x, y);

  VarmaModel model;
  model.p = p;
  model.q = q;
  model.k = k;
  model.intercept.resize(k);
  for (std::size_t c = 0; c < k; ++c) model.intercept[c] = coeffs.at(0, c);
  model.ar_coeffs.assign(p, Array2D(k, k));
  for (std::size_t lag = 0; lag < p; ++lag) {
    for (std::size_t row = 0; row < k; ++row) {
      for (std::size_t col = 0; col < k; ++col) {
        model.ar_coeffs[lag].at(row, col) = coeffs.at(1 + lag * k + col, row);
      }
    }
  }
  model.ma_coeffs.assign(q, Array2D(k, k));
  for (std::size_t lag = 0; lag < q; ++lag) {
    for (std::size_t row = 0; row < k; ++row) {
      for (std::size_t col = 0; col < k; ++col) {
        model.ma_coeffs[lag].at(row, col) = coeffs.at(1 + p * k + lag * k + col, row);
      }
    }
  }

  // Stage-2 in-sample residuals; keep the last q for forecasting straight
  // off the training data.
  model.residual_history.assign(q, std::vector<double>(k, 0.0));
  if (q > 0) {
    Array2D res2(rows, k);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        double pred = model.intercept[c];
        for (std::size_t i = 1; i < d; ++i) pred += x.at(r, i) * coeffs.at(i, c);
        res2.at(r, c) = y.at(r, c) - pred;
      }
    }
    for (std::size_t lag = 0; lag < q; ++lag) {
      // oldest first: history[0] is the residual q-1 steps back
      const std::size_t r = rows - q + lag;
      for (std::size_t c = 0; c < k; ++c) {
        model.residual_history[lag][c] = res2.at(r, c);
      }
    }
  }

  model.spectral_radius = companion_spectral_radius(model.ar_coeffs, k);
  model.long_order = h;
  model.long_intercept = long_fit.intercept;
  model.long_ar = long_fit.coeffs;
  return model;
}

Array2D VarmaModel::residual_proxies(const Array2D& series) const {
  Array2D residuals(series.rows, k);
  if (long_order == 0) return residuals;
  for (std::size_t t = long_order; t < series.rows; ++t) {
    for (std::size_t row = 0; row < k; ++row) {
      double pred = long_intercept[row];
      for (std::size_t lag = 1; lag <= long_order; ++lag) {
        const double* past = series.row(t - lag);
        const double* arow = long_ar[lag - 1].row(row);
        for (std::size_t c = 0; c < k; ++c) pred += arow[c] * past[c];
      }
      residuals.at(t, row) = series.at(t, row) - pred;
    }
  }
  return residuals;
}

Array2D varma_forecast(const VarmaModel& model, const Array2D& recent,
                       std::size_t horizon) {
  require(model.k >= 1 && model.p + model.q >= 1, Status::InvalidArgument,
          "varma_forecast: model not fitted");
  require(recent.cols == model.k, Status::InvalidArgument,
          "varma_forecast: series count mismatch");
  require(recent.rows >= model.p, Status::InvalidArgument,
          "varma_forecast: insufficient history");
  const std::size_t k = model.k;
  const std::size_t r = recent.rows;

  // Innovations over the provided history: long-VAR one-step errors when the
  // window is deep enough, otherwise the residuals stored at fit time (the
  // window then abuts the training data).
  Array2D residuals(r, k);
  if (model.q > 0) {
    if (r >= model.long_order + model.q) {
      residuals = model.residual_proxies(recent);
    } else {
      for (std::size_t lag = 0; lag < model.q; ++lag) {
        const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(r) -
                                 static_cast<std::ptrdiff_t>(model.q) +
                                 static_cast<std::ptrdiff_t>(lag);
        if (t < 0) continue;
        for (std::size_t c = 0; c < k; ++c) {
          residuals.at(static_cast<std::size_t>(t), c) =
              model.residual_history[lag][c];
        }
      }
    }
  }

  // Recursive forecasts: pseudo-observations feed back, future residuals are
  // zero.
  Array2D forecasts(horizon, k);
  for (std::size_t step = 0; step < horizon; ++step) {
    for (std::size_t row = 0; row < k; ++row) {
      double pred = model.intercept[row];
      for (std::size_t lag = 1; lag <= model.p; ++lag) {
        const std::ptrdiff_t idx =
            static_cast<std::ptrdiff_t>(step) - static_cast<std::ptrdiff_t>(lag);
        const double* past =
            idx >= 0 ? forecasts.row(static_cast<std::size_t>(idx))
                     : recent.row(r - (lag - step));
        const double* arow = model.ar_coeffs[lag - 1].row(row);
        for (std::size_t c = 0; c < k; ++c) pred += arow[c] * past[c];
      }
      for (std::size_t lag = 1; lag <= model.q; ++lag) {
        const std::ptrdiff_t idx =
            static_cast<std::ptrdiff_t>(step) - static_cast<std::ptrdiff_t>(lag);
        if (idx >= 0) continue;  // future residuals are zero
        const std::size_t back = lag - step;  // 1 = last history row
        if (back > r) continue;
        const double* erow = residuals.row(r - back);
        const double* mrow = model.ma_coeffs[lag - 1].row(row);
        for (std::size_t c = 0; c < k; ++c) pred += mrow[c] * erow[c];
      }
      forecasts.at(step, row) = pred;
    }
  }
  return forecasts;
}

}  // namespace slf
