#ifndef ATTACKPROC_GOF_HPP
#define ATTACKPROC_GOF_HPP

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace attackproc {

struct ExponentialFit {
  double lambda_hat = 0.0;  // n / sum of gaps
  std::size_t n = 0;

  double cdf(double x) const { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-lambda_hat * x); }
  double quantile(double p) const { return -std::log1p(-p) / lambda_hat; }
};

// Closed-form exponential MLE. Requires strictly positive gaps and n >= 2.
ExponentialFit fit_exponential(std::span<const double> gaps);

using Cdf = std::function<double(double)>;

// sqrt(n) sup |F_n - F| over the order statistics.
double ks_statistic(std::span<const double> sample, const Cdf& cdf);

// 1/(12n) + sum_i (F(x_(i)) - (2i-1)/(2n))^2.
double cm_statistic(std::span<const double> sample, const Cdf& cdf);

// -n - (1/n) sum_i (2i-1) [ln u_(i) + ln(1 - u_(n+1-i))]; +infinity when a
// transformed point reaches 0 or 1 at working precision.
double ad_statistic(std::span<const double> sample, const Cdf& cdf);

struct CriticalValues {
  double ks = 0.01;
  double cm = 0.22;
  double ad = 1.13;
};

struct GofReport {
  ExponentialFit fit;
  double ks = 0.0;
  double cm = 0.0;
  double ad = 0.0;  // may be +infinity
  CriticalValues critical;
  bool reject_ks = false;
  bool reject_cm = false;
  bool reject_ad = false;
};

// Fits the exponential law to the gaps and evaluates all three statistics
// against it; reject flags compare each statistic with its critical value.
GofReport poisson_test(std::span<const double> gaps, const CriticalValues& critical = {});

struct QqData {
  std::vector<double> theoretical;  // F^{-1}((i - 0.5)/n)
  std::vector<double> empirical;    // sorted gaps
};

QqData qq_exponential(std::span<const double> gaps, const ExponentialFit& fit);

}  // namespace attackproc

#endif
