#pragma once

// Scalar autoregressive modelling of one sample series.
//
// Sign convention follows the usual signal-processing form
//
//     y[n] = -sum_{k=1..p} a[k] y[n-k] + u[n]
//
// so a positive a[1] means consecutive samples are anti-correlated.  All
// fitting is done on the mean-centred series; the mean is stored in the
// model and restored by forecast().

#include <cstddef>
#include <span>
#include <vector>

namespace arstack {

/// An ordered, finite sample series of length >= 2.
class Series {
public:
  /// Throws InvalidArgument if fewer than 2 samples, InvalidData if any sample is not finite.
  explicit Series(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double mean() const noexcept;

private:
  std::vector<double> values_;
};

struct ArModel {
  int order = 0;
  std::vector<double> coefficients;  // a[1..p], stored 0-based
  double mean = 0.0;
  double noise_variance = 0.0;

  /// True when every coefficient is exactly zero (degenerate-series model).
  bool is_zero() const noexcept;
};

struct LevinsonResult {
  std::vector<double> coefficients;
  double prediction_error = 0.0;
};

/// Biased sample autocovariance of the mean-centred series, lags 0..max_lag.
/// r[k] = (1/N) sum_{n=0}^{N-1-k} (y[n]-mean)(y[n+k]-mean).
std::vector<double> autocorrelation(const Series& s, std::size_t max_lag);

/// Span overload for hot loops; samples are assumed finite.
std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag);

/// Solves the Toeplitz system R a = -r[1..order] by Levinson-Durbin
/// recursion, where R is built from r[0..order-1].  `r` must hold at least
/// order+1 lags.  If the prediction error reaches zero the recursion stops
/// and the remaining coefficients are zero.
LevinsonResult levinson_durbin(std::span<const double> r, int order);

/// Yule-Walker fit of an AR(order) model.  Series with variance at or below
/// 1e-12 * max(1, mean^2) yield the zero model instead of an error.
ArModel fit_yule_walker(const Series& s, int order);
ArModel fit_yule_walker(std::span<const double> values, int order);

/// h-step-ahead forecast from the end of `s`.  Observed samples are used
/// where available and earlier forecasts beyond the end of the series.
double forecast(const ArModel& m, const Series& s, int horizon);
double forecast(const ArModel& m, std::span<const double> values, int horizon);

}  // namespace arstack
