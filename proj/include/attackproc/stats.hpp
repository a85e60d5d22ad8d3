#ifndef ATTACKPROC_STATS_HPP
#define ATTACKPROC_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "attackproc/rate_series.hpp"

namespace attackproc {

struct SummaryStats {
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // sample variance, n-1 denominator
  double max = 0.0;
  std::size_t n = 0;
  bool variance_flagged = false;  // n < 2, variance reported as 0
};

SummaryStats summarize(std::span<const double> values);

// Sample autocorrelation at lags 1..h_max with the n-term total sum of
// squares as denominator, so |rho| <= 1 and the curve is positive
// semidefinite.
struct AcfCurve {
  std::vector<double> rho;  // rho[h-1] is lag h
};

AcfCurve acf(std::span<const double> values, std::size_t h_max);

struct DispersionHint {
  double ratio = 0.0;  // variance / mean
  bool flag = false;   // ratio above threshold: likely not Poisson
};

DispersionHint dispersion_hint(const RateSeries& series, double threshold = 1.5);

// Ordinary least squares fit of y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

double sample_mean(std::span<const double> values);
double sample_variance(std::span<const double> values);      // n-1 denominator
double population_variance(std::span<const double> values);  // n denominator

}  // namespace attackproc

#endif
