#include "attackproc/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attackproc/errors.hpp"

namespace attackproc {

namespace {

std::vector<double> sorted_copy(std::span<const double> sample) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

ExponentialFit fit_exponential(std::span<const double> gaps) {
  if (gaps.size() < 2) {
    throw_data_error(ErrorCode::too_few_arrivals, "exponential fit needs at least 2 gaps");
  }
  double sum = 0.0;
  for (double g : gaps) {
    if (g <= 0.0) {
      throw_data_error(ErrorCode::non_positive_gap, "all gaps must be positive");
    }
    sum += g;
  }
  ExponentialFit fit;
  fit.n = gaps.size();
  fit.lambda_hat = static_cast<double>(gaps.size()) / sum;
  return fit;
}

double ks_statistic(std::span<const double> sample, const Cdf& cdf) {
  const std::vector<double> s = sorted_copy(sample);
  const double n = static_cast<double>(s.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    sup = std::max({sup, upper, lower});
  }
  return std::sqrt(n) * sup;
}

double cm_statistic(std::span<const double> sample, const Cdf& cdf) {
  const std::vector<double> s = sorted_copy(sample);
  const double n = static_cast<double>(s.size());
  double total = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    const double target = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    total += (f - target) * (f - target);
  }
  return total;
}

double ad_statistic(std::span<const double> sample, const Cdf& cdf) {
  const std::vector<double> s = sorted_copy(sample);
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u_low = cdf(s[i]);
    const double u_high = cdf(s[n - 1 - i]);
    // The weight [F(1-F)]^{-1} blows up at the support edges.
    if (u_low <= 0.0 || u_low >= 1.0 || u_high <= 0.0 || u_high >= 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    total += (2.0 * static_cast<double>(i) + 1.0) * (std::log(u_low) + std::log1p(-u_high));
  }
  return -nd - total / nd;
}

GofReport poisson_test(std::span<const double> gaps, const CriticalValues& critical) {
  GofReport report;
  report.fit = fit_exponential(gaps);
  const Cdf cdf = [fit = report.fit](double x) { return fit.cdf(x); };
  report.ks = ks_statistic(gaps, cdf);
  report.cm = cm_statistic(gaps, cdf);
  report.ad = ad_statistic(gaps, cdf);
  report.critical = critical;
  report.reject_ks = report.ks > critical.ks;
  report.reject_cm = report.cm > critical.cm;
  report.reject_ad = report.ad > critical.ad;
  return report;
}

QqData qq_exponential(std::span<const double> gaps, const ExponentialFit& fit) {
  QqData qq;
  qq.empirical = sorted_copy(gaps);
  const double n = static_cast<double>(gaps.size());
  qq.theoretical.resize(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    qq.theoretical[i] = fit.quantile((static_cast<double>(i) + 0.5) / n);
  }
  return qq;
}

}  // namespace attackproc
