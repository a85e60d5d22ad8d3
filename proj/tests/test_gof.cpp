#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "attackproc/errors.hpp"
#include "attackproc/gof.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/simulate.hpp"

using namespace attackproc;

namespace {

std::vector<double> exponential_gaps(double lambda, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> gaps(n);
  for (double& g : gaps) g = rng.exponential(lambda);
  return gaps;
}

// Exact quantile sample of the Exp(lambda) law: x_i = F^{-1}((i-0.5)/n).
std::vector<double> exact_quantile_sample(double lambda, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -std::log(1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(n)) / lambda;
  }
  return x;
}

}  // namespace

TEST_CASE("exponential MLE closed form") {
  CHECK(fit_exponential(std::vector<double>{1, 1, 1}).lambda_hat == doctest::Approx(1.0));
  CHECK(fit_exponential(std::vector<double>{2, 2, 2, 2}).lambda_hat == doctest::Approx(0.5));
}

TEST_CASE("exponential MLE recovers the rate") {
  ExponentialFit fit = fit_exponential(exponential_gaps(3.0, 10000, 77));
  CHECK(fit.lambda_hat > 2.9);
  CHECK(fit.lambda_hat < 3.1);
}

TEST_CASE("exponential MLE rejects bad input") {
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{1.0, 0.0}), DataError);
  CHECK_THROWS_AS(fit_exponential(std::vector<double>{1.0, -2.0}), DataError);
}

TEST_CASE("KS hand value: single point ln 2 against Exp(1)") {
  ExponentialFit unit{1.0, 1};
  const double ks =
      ks_statistic(std::vector<double>{std::log(2.0)}, [&](double x) { return unit.cdf(x); });
  CHECK(ks == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("KS of the exact quantile sample is 1/(2 sqrt n)") {
  const std::size_t n = 100;
  ExponentialFit unit{1.0, n};
  const double ks =
      ks_statistic(exact_quantile_sample(1.0, n), [&](double x) { return unit.cdf(x); });
  CHECK(ks == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("KS against the sample's own empirical CDF is at most 1/sqrt(n)") {
  // With F set to the left-continuous empirical CDF the sup term is the
  // 1/n jump itself; the statistic collapses to sqrt(n) * 1/n.
  std::vector<double> sample = exponential_gaps(1.0, 50, 3);
  std::vector<double> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  auto empirical = [&](double x) {
    std::size_t count = 0;
    for (double v : sorted) {
      if (v < x) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(sorted.size());
  };
  const double ks = ks_statistic(sample, empirical);
  CHECK(ks == doctest::Approx(std::sqrt(50.0) / 50.0).epsilon(1e-9));
}

TEST_CASE("CM of the exact quantile sample collapses to 1/(12n)") {
  const std::size_t n = 100;
  ExponentialFit unit{1.0, n};
  const double cm =
      cm_statistic(exact_quantile_sample(1.0, n), [&](double x) { return unit.cdf(x); });
  CHECK(cm == doctest::Approx(1.0 / 1200.0).epsilon(1e-9));
}

TEST_CASE("CM hand value: single point ln 2 against Exp(1)") {
  ExponentialFit unit{1.0, 1};
  const double cm =
      cm_statistic(std::vector<double>{std::log(2.0)}, [&](double x) { return unit.cdf(x); });
  CHECK(cm == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("AD returns infinity when a point saturates the CDF") {
  ExponentialFit unit{1.0, 3};
  const double ad = ad_statistic(std::vector<double>{0.5, 1.0, 5000.0},
                                 [&](double x) { return unit.cdf(x); });
  CHECK(std::isinf(ad));
}

TEST_CASE("null exponential samples stay below the CM and AD critical values") {
  int cm_ok = 0, ad_ok = 0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    GofReport report =
        poisson_test(exponential_gaps(1.0, 5000, 1000 + static_cast<std::uint64_t>(s)));
    if (report.cm < 0.22) ++cm_ok;
    if (report.ad < 1.13) ++ad_ok;
  }
  CHECK(cm_ok >= seeds * 9 / 10);
  CHECK(ad_ok >= seeds * 9 / 10);
}

TEST_CASE("Pareto gaps are rejected by AD") {
  GeneratorSpec spec;
  spec.kind = GenKind::gpd_sample;
  spec.xi = 0.8;
  spec.beta = 1.0;
  spec.n = 5000;
  int rejected = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    spec.seed = 2000 + static_cast<std::uint64_t>(s);
    GofReport report = poisson_test(generate(spec));
    if (report.reject_ad) ++rejected;
    CHECK(report.ad > 1.13);
  }
  CHECK(rejected == seeds);
}

TEST_CASE("LRD-rate-driven arrivals violate the exponential law") {
  // Arrival gaps pooled from a FARIMA-modulated rate are overdispersed.
  GeneratorSpec spec;
  spec.kind = GenKind::farima0;
  spec.d = 0.4;
  spec.n = 256;
  spec.seed = 5;
  std::vector<double> rate = generate(spec);
  Rng rng(9);
  std::vector<double> gaps;
  for (double r : rate) {
    const double lambda = std::max(0.2, 10.0 + 6.0 * r);
    const auto count = static_cast<std::size_t>(lambda);
    for (std::size_t i = 0; i < count; ++i) gaps.push_back(rng.exponential(lambda));
  }
  GofReport report = poisson_test(gaps);
  CHECK(report.reject_cm);
  CHECK(report.reject_ad);
}

TEST_CASE("constant gaps are maximally non-exponential") {
  GofReport report = poisson_test(std::vector<double>(100, 1.0));
  CHECK(report.reject_ks);
  CHECK(report.reject_cm);
  CHECK(report.reject_ad);
  CHECK(report.ks > 1.0);
}

TEST_CASE("statistics are scale equivariant under refitting") {
  std::vector<double> gaps = exponential_gaps(2.0, 400, 11);
  GofReport a = poisson_test(gaps);
  std::vector<double> scaled(gaps);
  for (double& g : scaled) g *= 37.5;
  GofReport b = poisson_test(scaled);
  CHECK(a.ks == doctest::Approx(b.ks).epsilon(1e-9));
  CHECK(a.cm == doctest::Approx(b.cm).epsilon(1e-9));
  CHECK(a.ad == doctest::Approx(b.ad).epsilon(1e-9));
}

TEST_CASE("statistics are nonnegative and respond monotonically to a moved point") {
  std::vector<double> gaps = exponential_gaps(1.0, 200, 13);
  GofReport base = poisson_test(gaps);
  CHECK(base.ks >= 0.0);
  CHECK(base.cm >= 0.0);
  CHECK(base.ad >= 0.0);
  // Pushing the largest gap far into the tail cannot decrease the fit gap.
  std::vector<double> moved(gaps);
  *std::max_element(moved.begin(), moved.end()) *= 50.0;
  const ExponentialFit fixed = base.fit;  // same fitted law for both samples
  auto cdf = [&](double x) { return fixed.cdf(x); };
  CHECK(ks_statistic(moved, cdf) >= ks_statistic(gaps, cdf) - 1e-12);
  CHECK(cm_statistic(moved, cdf) >= cm_statistic(gaps, cdf) - 1e-12);
}

TEST_CASE("null rejection rate of CM and AD is near the nominal level") {
  int cm_reject = 0, ad_reject = 0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s) {
    GofReport report =
        poisson_test(exponential_gaps(1.0, 400, 40000 + static_cast<std::uint64_t>(s)));
    if (report.reject_cm) ++cm_reject;
    if (report.reject_ad) ++ad_reject;
  }
  // CV 0.22 is the 5% point; CV 1.13 sits near the 10% point of the
  // estimated-parameter AD law. Both must stay within 5 points.
  CHECK(cm_reject <= seeds / 10);
  CHECK(ad_reject <= seeds * 3 / 20);
}

TEST_CASE("QQ data of a perfect quantile sample lies on the identity") {
  const std::size_t n = 64;
  std::vector<double> sample = exact_quantile_sample(0.5, n);
  ExponentialFit fit{0.5, n};
  QqData qq = qq_exponential(sample, fit);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(qq.theoretical[i] == doctest::Approx(qq.empirical[i]).epsilon(1e-12));
  }
}

TEST_CASE("QQ upper tail of Pareto data deviates above the line") {
  GeneratorSpec spec;
  spec.kind = GenKind::gpd_sample;
  spec.xi = 0.8;
  spec.beta = 1.0;
  spec.n = 2000;
  spec.seed = 3;
  std::vector<double> sample = generate(spec);
  QqData qq = qq_exponential(sample, fit_exponential(sample));
  CHECK(qq.empirical.back() > 3.0 * qq.theoretical.back());
}

TEST_CASE("QQ with one point") {
  ExponentialFit fit{2.0, 1};
  QqData qq = qq_exponential(std::vector<double>{0.9}, fit);
  REQUIRE(qq.theoretical.size() == 1);
  CHECK(qq.theoretical[0] == doctest::Approx(-std::log(0.5) / 2.0));
  CHECK(qq.empirical[0] == 0.9);
}

TEST_CASE("sequences in QQ data are nondecreasing and equally long") {
  std::vector<double> gaps = exponential_gaps(1.5, 333, 21);
  QqData qq = qq_exponential(gaps, fit_exponential(gaps));
  REQUIRE(qq.theoretical.size() == qq.empirical.size());
  for (std::size_t i = 1; i < qq.theoretical.size(); ++i) {
    CHECK(qq.theoretical[i] >= qq.theoretical[i - 1]);
    CHECK(qq.empirical[i] >= qq.empirical[i - 1]);
  }
}
