#include "attackproc/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "attackproc/errors.hpp"

namespace attackproc {

double sample_mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

double population_variance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) {
    throw_data_error(ErrorCode::empty_input, "summarize needs at least one value");
  }
  SummaryStats s;
  s.n = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = sample_mean(values);
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (values.size() < 2) {
    s.variance = 0.0;
    s.variance_flagged = true;
  } else {
    s.variance = sample_variance(values);
  }
  return s;
}

AcfCurve acf(std::span<const double> values, std::size_t h_max) {
  const std::size_t n = values.size();
  if (h_max == 0 || n < h_max + 2) {
    throw_data_error(ErrorCode::empty_input, "series too short for requested lags");
  }
  const double mean = sample_mean(values);
  double denom = 0.0;
  for (double v : values) denom += (v - mean) * (v - mean);
  if (denom <= 0.0) {
    throw_data_error(ErrorCode::zero_variance, "autocorrelation undefined for constant series");
  }
  // Lag 0 would be denom/denom = 1 by construction.
  assert(std::abs(denom / denom - 1.0) == 0.0);
  AcfCurve curve;
  curve.rho.resize(h_max);
  for (std::size_t h = 1; h <= h_max; ++h) {
    double num = 0.0;
    for (std::size_t t = 0; t + h < n; ++t) {
      num += (values[t] - mean) * (values[t + h] - mean);
    }
    curve.rho[h - 1] = num / denom;
  }
  return curve;
}

DispersionHint dispersion_hint(const RateSeries& series, double threshold) {
  std::vector<double> values = series.as_doubles();
  if (values.empty()) {
    throw_data_error(ErrorCode::empty_input, "empty rate series");
  }
  const double mean = sample_mean(values);
  if (mean <= 0.0) {
    throw_data_error(ErrorCode::zero_mean, "dispersion ratio needs a positive mean rate");
  }
  DispersionHint hint;
  hint.ratio = sample_variance(values) / mean;
  hint.flag = hint.ratio > threshold;
  return hint;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size() && x.size() >= 2);
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace attackproc
