#include "arstack/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arstack/errors.hpp"

namespace arstack {

namespace {

double mean_of(std::span<const double> v) noexcept {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

void check_order(int order, std::size_t n) {
  if (order < 1 || static_cast<std::size_t>(order) >= n) {
    throw InvalidArgument("AR order must satisfy 1 <= p < N (p=" + std::to_string(order) +
                          ", N=" + std::to_string(n) + ")");
  }
}

std::vector<double> autocov_unchecked(std::span<const double> v, double mean,
                                      std::size_t max_lag) {
  const std::size_t n = v.size();
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += (v[i] - mean) * (v[i + k] - mean);
    r[k] = acc / static_cast<double>(n);
  }
  return r;
}

}  // namespace

Series::Series(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw InvalidArgument("series requires at least 2 samples");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidData("series sample " + std::to_string(i) + " is not finite");
    }
  }
}

double Series::mean() const noexcept { return mean_of(values_); }

bool ArModel::is_zero() const noexcept {
  return std::all_of(coefficients.begin(), coefficients.end(),
                     [](double a) { return a == 0.0; });
}

std::vector<double> autocorrelation(const Series& s, std::size_t max_lag) {
  return autocorrelation(s.values(), max_lag);
}

std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag) {
  if (max_lag >= values.size()) {
    throw InvalidArgument("autocorrelation lag " + std::to_string(max_lag) +
                          " must be below series length " + std::to_string(values.size()));
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw InvalidData("autocorrelation input is not finite");
  }
  return autocov_unchecked(values, mean_of(values), max_lag);
}

LevinsonResult levinson_durbin(std::span<const double> r, int order) {
  if (order < 1 || r.size() < static_cast<std::size_t>(order) + 1) {
    throw InvalidArgument("levinson_durbin needs order >= 1 and order+1 autocorrelation lags");
  }
  const auto p = static_cast<std::size_t>(order);
  LevinsonResult out;
  out.coefficients.assign(p, 0.0);
  auto& a = out.coefficients;
  std::vector<double> prev(p, 0.0);
  double err = r[0];

  for (std::size_t k = 1; k <= p; ++k) {
    if (!(err > 0.0)) break;
    double acc = r[k];
    for (std::size_t j = 1; j < k; ++j) acc += a[j - 1] * r[k - j];
    const double reflection = -acc / err;

    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k - 1), prev.begin());
    for (std::size_t j = 1; j < k; ++j) a[j - 1] = prev[j - 1] + reflection * prev[k - j - 1];
    a[k - 1] = reflection;
    err *= (1.0 - reflection * reflection);
  }
  out.prediction_error = std::max(err, 0.0);
  return out;
}

ArModel fit_yule_walker(const Series& s, int order) { return fit_yule_walker(s.values(), order); }

ArModel fit_yule_walker(std::span<const double> values, int order) {
  check_order(order, values.size());
  ArModel m;
  m.order = order;
  m.mean = mean_of(values);
  m.coefficients.assign(static_cast<std::size_t>(order), 0.0);

  const auto r = autocov_unchecked(values, m.mean, static_cast<std::size_t>(order));
  const double floor = 1e-12 * std::max(1.0, m.mean * m.mean);
  if (r[0] <= floor) return m;

  auto solved = levinson_durbin(r, order);
  m.coefficients = std::move(solved.coefficients);
  m.noise_variance = solved.prediction_error;
  return m;
}

double forecast(const ArModel& m, const Series& s, int horizon) {
  return forecast(m, s.values(), horizon);
}

double forecast(const ArModel& m, std::span<const double> values, int horizon) {
  if (horizon < 1) throw InvalidArgument("forecast horizon must be >= 1");
  const auto p = m.coefficients.size();
  if (values.size() < p) throw InvalidArgument("series shorter than the model order");

  // history[0] is the most recent centred sample.
  std::vector<double> history(p);
  for (std::size_t k = 0; k < p; ++k) history[k] = values[values.size() - 1 - k] - m.mean;

  double next = 0.0;
  for (int step = 0; step < horizon; ++step) {
    double acc = 0.0;
    for (std::size_t k = 0; k < p; ++k) acc += m.coefficients[k] * history[k];
    next = -acc;
    if (p > 0) {
      std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
      history[0] = next;
    }
  }
  return next + m.mean;
}

}  // namespace arstack
