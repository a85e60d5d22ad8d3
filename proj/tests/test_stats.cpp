#include <doctest.h>

#include <cmath>
#include <vector>

#include "attackproc/errors.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/simulate.hpp"
#include "attackproc/stats.hpp"

using namespace attackproc;

TEST_CASE("summarize hand values") {
  SummaryStats s = summarize(std::vector<double>{1, 2, 3, 4, 5});
  CHECK(s.min == 1);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.variance == doctest::Approx(2.5));
  CHECK(s.max == 5);
  CHECK(s.n == 5);
  CHECK_FALSE(s.variance_flagged);
}

TEST_CASE("summarize single value flags variance") {
  SummaryStats s = summarize(std::vector<double>{7});
  CHECK(s.min == 7);
  CHECK(s.mean == 7);
  CHECK(s.median == 7);
  CHECK(s.max == 7);
  CHECK(s.variance == 0);
  CHECK(s.variance_flagged);
}

TEST_CASE("summarize constant series has zero variance") {
  SummaryStats s = summarize(std::vector<double>{2, 2, 2, 2});
  CHECK(s.variance == 0);
  CHECK_FALSE(s.variance_flagged);
}

TEST_CASE("summarize median of even count is the midpoint") {
  CHECK(summarize(std::vector<double>{1, 2, 3, 10}).median == doctest::Approx(2.5));
}

TEST_CASE("summarize rejects empty input") {
  CHECK_THROWS_AS(summarize(std::vector<double>{}), DataError);
}

TEST_CASE("summarize is permutation invariant") {
  Rng rng(42);
  std::vector<double> values(101);
  for (double& v : values) v = rng.normal();
  SummaryStats a = summarize(values);
  // A fixed shuffle via seeded index swaps.
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.next_u64() % i]);
  }
  SummaryStats b = summarize(values);
  CHECK(a.min == b.min);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.median == b.median);
  CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-12));
  CHECK(a.max == b.max);
}

TEST_CASE("acf hand value for 1..4") {
  // rho(1) = sum (x_t - 2.5)(x_{t+1} - 2.5) / sum (x_t - 2.5)^2 = 1.25 / 5.
  AcfCurve curve = acf(std::vector<double>{1, 2, 3, 4}, 1);
  CHECK(curve.rho[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("acf rejects constant series") {
  CHECK_THROWS_AS(acf(std::vector<double>(32, 3.0), 2), DataError);
}

TEST_CASE("acf of white noise is near zero at lag 1") {
  GeneratorSpec spec;
  spec.kind = GenKind::white_noise;
  spec.n = 10000;
  spec.seed = 7;
  AcfCurve curve = acf(generate(spec), 1);
  CHECK(std::abs(curve.rho[0]) < 0.05);  // 3 sigma is about 3/sqrt(n) = 0.03
}

TEST_CASE("acf is invariant under positive affine maps") {
  GeneratorSpec spec;
  spec.kind = GenKind::ar1;
  spec.phi = 0.6;
  spec.n = 500;
  spec.seed = 3;
  std::vector<double> x = generate(spec);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.5 * x[i] - 7.0;
  AcfCurve a = acf(x, 10);
  AcfCurve b = acf(y, 10);
  for (std::size_t h = 0; h < 10; ++h) {
    CHECK(a.rho[h] == doctest::Approx(b.rho[h]).epsilon(1e-12));
  }
}

TEST_CASE("acf magnitudes stay within one") {
  GeneratorSpec spec;
  spec.kind = GenKind::farima0;
  spec.d = 0.4;
  spec.n = 400;
  spec.seed = 5;
  AcfCurve curve = acf(generate(spec), 50);
  for (double rho : curve.rho) {
    CHECK(std::abs(rho) <= 1.0);
  }
}

TEST_CASE("dispersion hint on Poisson counts stays near one") {
  // Bucket a homogeneous Poisson process into unit intervals.
  GeneratorSpec spec;
  spec.kind = GenKind::poisson_process;
  spec.lambda = 20.0;
  spec.n = 100000;
  spec.seed = 11;
  std::vector<double> arrivals = generate(spec);
  RateSeries series;
  series.bucket = 1.0;
  series.origin = 0.0;
  series.counts.assign(static_cast<std::size_t>(arrivals.back()) + 1, 0);
  for (double t : arrivals) ++series.counts[static_cast<std::size_t>(t)];
  // Drop the final partial bucket.
  series.counts.pop_back();
  DispersionHint hint = dispersion_hint(series);
  CHECK(hint.ratio == doctest::Approx(1.0).epsilon(0.15));
  CHECK_FALSE(hint.flag);
}

TEST_CASE("dispersion hint flags a paper-style overdispersed series") {
  RateSeries series;
  series.counts = {10, 2, 30, 1, 44, 3, 25, 2, 18, 40};
  SummaryStats s = summarize(series.as_doubles());
  REQUIRE(s.variance > 3.5 * s.mean);
  DispersionHint hint = dispersion_hint(series);
  CHECK(hint.flag);
  CHECK(hint.ratio > 3.5);
}

TEST_CASE("dispersion of constant positive series is zero and unflagged") {
  RateSeries series;
  series.counts = {4, 4, 4, 4};
  DispersionHint hint = dispersion_hint(series);
  CHECK(hint.ratio == 0.0);
  CHECK_FALSE(hint.flag);
}

TEST_CASE("dispersion rejects zero mean") {
  RateSeries series;
  series.counts = {0, 0, 0};
  CHECK_THROWS_AS(dispersion_hint(series), DataError);
}
