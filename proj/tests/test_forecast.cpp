#include <doctest.h>

#include <cmath>
#include <vector>

#include "attackproc/errors.hpp"
#include "attackproc/model.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/rolling.hpp"
#include "attackproc/simulate.hpp"
#include "attackproc/stats.hpp"

using namespace attackproc;

namespace {

std::vector<double> ar2_series(double phi1, double phi2, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n + 200);
  x[0] = rng.normal();
  x[1] = rng.normal();
  for (std::size_t t = 2; t < x.size(); ++t) {
    x[t] = phi1 * x[t - 1] + phi2 * x[t - 2] + rng.normal();
  }
  return {x.end() - static_cast<long>(n), x.end()};
}

std::vector<double> farima_series(double d, std::size_t n, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GenKind::farima0;
  spec.d = d;
  spec.n = n;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_CASE("fracdiff weights by hand") {
  std::vector<double> pi = fracdiff_weights(0.4, 4);
  CHECK(pi[0] == doctest::Approx(1.0));
  CHECK(pi[1] == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(pi[2] == doctest::Approx(-0.12).epsilon(1e-12));
  CHECK(pi[3] == doctest::Approx(-0.064).epsilon(1e-12));
}

TEST_CASE("fracdiff at d=0 is the identity") {
  std::vector<double> x = {3.0, -1.0, 2.5, 0.0, 9.0};
  CHECK(fracdiff(x, 0.0) == x);
}

TEST_CASE("fracdiff at d=1 is first differences") {
  std::vector<double> x = {3.0, 5.0, 4.0, 10.0};
  std::vector<double> y = fracdiff(x, 1.0);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(-1.0));
  CHECK(y[3] == doctest::Approx(6.0));
}

TEST_CASE("fracdiff round-trips through -d away from the burn-in") {
  Rng rng(17);
  std::vector<double> x(1024);
  for (double& v : x) v = rng.normal();
  for (double d : {0.1, 0.3, 0.45}) {
    std::vector<double> back = fracdiff(fracdiff(x, d), -d);
    for (std::size_t t = x.size() / 2; t < x.size(); ++t) {
      CHECK(std::abs(back[t] - x[t]) <= 1e-8);
    }
  }
}

TEST_CASE("AR(1) coefficient is recovered") {
  GeneratorSpec spec;
  spec.kind = GenKind::ar1;
  spec.phi = 0.6;
  spec.n = 2000;
  spec.seed = 23;
  ArmaModel model = fit_arma(generate(spec), 1, 0);
  REQUIRE(model.converged);
  CHECK(model.phi[0] > 0.55);
  CHECK(model.phi[0] < 0.65);
}

TEST_CASE("white-noise (0,0) fit equals the sample variance and wins the AIC race") {
  int aic_wins = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    GeneratorSpec spec;
    spec.kind = GenKind::white_noise;
    spec.n = 1000;
    spec.seed = 3000 + static_cast<std::uint64_t>(s);
    std::vector<double> x = generate(spec);
    ArmaModel base = fit_arma(x, 0, 0);
    CHECK(base.sigma2 == doctest::Approx(population_variance(x)).epsilon(1e-12));
    SelectedModel best = select_best(x, ModelFamily::arma, {}, Exec::serial);
    if (best.p() == 0 && best.q() == 0) ++aic_wins;
  }
  CHECK(aic_wins >= seeds * 7 / 10);
}

TEST_CASE("constant series cannot be fit with AR/MA orders") {
  CHECK_THROWS_AS(fit_arma(std::vector<double>(100, 4.0), 1, 0), DataError);
}

TEST_CASE("FARIMA d is recovered") {
  for (std::uint64_t s : {1ULL, 2ULL, 3ULL}) {
    FarimaModel model = fit_farima(farima_series(0.35, 4096, 4000 + s), 0, 0);
    REQUIRE(model.converged);
    CHECK(model.d > 0.28);
    CHECK(model.d < 0.42);
  }
}

TEST_CASE("FARIMA on short-memory data finds d near zero and a nested AIC") {
  GeneratorSpec spec;
  spec.kind = GenKind::white_noise;
  spec.n = 2000;
  spec.seed = 31;
  std::vector<double> x = generate(spec);
  FarimaModel farima = fit_farima(x, 0, 0);
  ArmaModel arma = fit_arma(x, 0, 0);
  REQUIRE(farima.converged);
  CHECK(farima.d > -0.1);
  CHECK(farima.d < 0.1);
  CHECK(std::abs(farima.aic - arma.aic) <= 2.0 + 1e-6);
}

TEST_CASE("fGn H=0.8 maps to d near 0.3") {
  GeneratorSpec spec;
  spec.kind = GenKind::fgn;
  spec.hurst = 0.8;
  spec.n = 4096;
  spec.seed = 37;
  FarimaModel model = fit_farima(generate(spec), 0, 0);
  REQUIRE(model.converged);
  CHECK(model.d > 0.2);
  CHECK(model.d < 0.4);
}

TEST_CASE("FARIMA with d=0 and ARMA share the CSS value exactly") {
  std::vector<double> x = ar2_series(0.5, 0.2, 500, 41);
  const double mean = sample_mean(x);
  std::vector<double> centered(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mean;
  const std::vector<double> phi = {0.4, 0.1};
  const std::vector<double> theta = {0.3};
  const double arma_rss = css_rss(centered, phi, theta);
  const double farima_rss = css_rss(fracdiff(centered, 0.0), phi, theta);
  CHECK(std::abs(arma_rss - farima_rss) < 1e-9);
}

TEST_CASE("select_best finds the AR(2) structure most of the time") {
  int hits = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> x = ar2_series(0.65, -0.3, 1500, 5000 + static_cast<std::uint64_t>(s));
    SelectOptions options;
    options.max_p = 3;
    options.max_q = 2;
    SelectedModel best = select_best(x, ModelFamily::arma, options, Exec::serial);
    if (best.p() == 2 && best.q() == 0) ++hits;
  }
  CHECK(hits >= 7);
}

TEST_CASE("candidates that need more data than available are skipped") {
  // 72 observations allow (0,0)..(1,1) but not the larger grid entries.
  std::vector<double> x = ar2_series(0.4, 0.0, 72, 43);
  SelectedModel best = select_best(x, ModelFamily::arma, {}, Exec::serial);
  CHECK(best.p() + best.q() <= 8);  // selection succeeded despite skips
}

TEST_CASE("select_best returns only converged models") {
  std::vector<double> x = ar2_series(0.5, 0.1, 400, 47);
  SelectedModel best = select_best(x, ModelFamily::arma, {}, Exec::serial);
  CHECK(best.arma.converged);
}

TEST_CASE("fitted models are causal and invertible") {
  std::vector<double> x = ar2_series(0.7, -0.2, 800, 53);
  SelectOptions options;
  options.max_p = 2;
  options.max_q = 2;
  SelectedModel best = select_best(x, ModelFamily::arma, options, Exec::serial);
  std::vector<double> pacf;
  CHECK(coefficients_to_pacf(best.arma.phi, pacf));
  for (double r : pacf) CHECK(std::abs(r) < 1.0);
  CHECK(coefficients_to_pacf(best.arma.theta, pacf));
  for (double r : pacf) CHECK(std::abs(r) < 1.0);
}

TEST_CASE("select_best parallel equals serial") {
  std::vector<double> x = ar2_series(0.6, -0.1, 600, 59);
  SelectedModel serial = select_best(x, ModelFamily::arma, {}, Exec::serial);
  SelectedModel parallel = select_best(x, ModelFamily::arma, {}, Exec::parallel);
  CHECK(serial.p() == parallel.p());
  CHECK(serial.q() == parallel.q());
  CHECK(serial.aic() == parallel.aic());
  CHECK(serial.arma.phi == parallel.arma.phi);
}

TEST_CASE("AR(1) forecasts by hand") {
  ArmaModel model;
  model.p = 1;
  model.phi = {0.5};
  model.mean = 0.0;
  std::vector<double> history = {1.0, -2.0, 4.0};
  CHECK(forecast_arma(model, history, 1) == doctest::Approx(2.0));
  CHECK(forecast_arma(model, history, 2) == doctest::Approx(1.0));
}

TEST_CASE("mean model forecasts the mean at every horizon") {
  ArmaModel model;
  model.mean = 10.0;
  std::vector<double> history = {9.0, 11.0, 10.0};
  for (int h = 1; h <= 5; ++h) {
    CHECK(forecast_arma(model, history, h) == doctest::Approx(10.0));
  }
}

TEST_CASE("negative forecasts are floored at zero") {
  ArmaModel model;
  model.p = 1;
  model.phi = {0.9};
  model.mean = 1.0;
  std::vector<double> history = {1.0, 1.0, -20.0};
  CHECK(forecast_arma(model, history, 1) == 0.0);
}

TEST_CASE("tower property holds exactly for pure AR") {
  ArmaModel model;
  model.p = 2;
  model.phi = {0.5, 0.2};
  model.mean = 10.0;
  std::vector<double> history = {12.0, 11.0, 14.0, 13.0};
  const double direct = forecast_arma(model, history, 3);
  std::vector<double> extended(history);
  extended.push_back(forecast_arma(model, history, 1));
  extended.push_back(forecast_arma(model, extended, 1));
  extended.push_back(forecast_arma(model, extended, 1));
  CHECK(direct == doctest::Approx(extended.back()).epsilon(1e-14));
}

TEST_CASE("FARIMA(0,d,0) forecast matches the direct pi-weight convolution") {
  FarimaModel model;
  model.d = 0.3;
  model.mean = 5.0;
  std::vector<double> history = farima_series(0.3, 200, 61);
  for (double& v : history) v += 5.0;
  const double forecast = forecast_farima(model, history, 1);

  // Independent oracle: x_hat_{t+1} - mu = -sum_{j>=1} pi_j (x_{t+1-j} - mu).
  std::vector<double> pi = fracdiff_weights(0.3, history.size() + 1);
  double acc = 0.0;
  for (std::size_t j = 1; j <= history.size(); ++j) {
    acc -= pi[j] * (history[history.size() - j] - 5.0);
  }
  CHECK(forecast == doctest::Approx(std::max(0.0, 5.0 + acc)).epsilon(1e-10));
}

TEST_CASE("accuracy identities and hand values") {
  AccuracyReport perfect =
      accuracy(std::vector<double>{10, 10}, std::vector<double>{10, 10});
  CHECK(perfect.pmad == 0.0);
  CHECK(perfect.oa == 1.0);
  CHECK(perfect.ua == 1.0);

  AccuracyReport mixed = accuracy(std::vector<double>{10, 20}, std::vector<double>{15, 15});
  CHECK(mixed.pmad == doctest::Approx(10.0 / 30.0).epsilon(1e-12));
  CHECK(mixed.pmad_prime == doctest::Approx(5.0 / 20.0).epsilon(1e-12));

  AccuracyReport over = accuracy(std::vector<double>{5}, std::vector<double>{9});
  CHECK(over.pmad == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(over.pmad_prime == 0.0);
}

TEST_CASE("accuracy identities hold to machine precision on random inputs") {
  Rng rng(67);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 1 + rng.next_u64() % 20;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 1.0 + 50.0 * rng.uniform01();
      y[i] = 50.0 * rng.uniform01();
    }
    AccuracyReport report = accuracy(x, y);
    CHECK(report.oa == 1.0 - report.pmad);
    CHECK(report.ua == 1.0 - report.pmad_prime);
    // Joint positive scaling leaves both errors unchanged.
    std::vector<double> xs(x), ys(y);
    for (double& v : xs) v *= 4.0;
    for (double& v : ys) v *= 4.0;
    AccuracyReport scaled = accuracy(xs, ys);
    CHECK(scaled.pmad == doctest::Approx(report.pmad).epsilon(1e-12));
    CHECK(scaled.pmad_prime == doctest::Approx(report.pmad_prime).epsilon(1e-12));
  }
}

TEST_CASE("accuracy rejects a zero denominator") {
  CHECK_THROWS_AS(accuracy(std::vector<double>{0, 0}, std::vector<double>{1, 1}), DataError);
}

TEST_CASE("rolling evaluation covers the spec step counts") {
  GeneratorSpec spec;
  spec.kind = GenKind::ar1;
  spec.phi = 0.4;
  spec.n = 200;
  spec.seed = 71;
  std::vector<double> x = generate(spec);
  for (double& v : x) v = std::floor(20.0 + 4.0 * v);
  RollingOptions options;
  options.family = ModelFamily::arma;
  options.horizon = 1;
  options.select.max_p = 1;
  options.select.max_q = 1;
  options.exec = Exec::serial;
  ForecastRun run = rolling_evaluate(x, options);
  CHECK(run.steps.size() + run.skipped.size() == 200 - 1 - 100 + 1);
  CHECK(run.steps.front().t == 100);
}

TEST_CASE("constant series is perfectly self-predictable") {
  std::vector<double> x(200, 7.0);
  RollingOptions options;
  options.family = ModelFamily::arma;
  options.exec = Exec::serial;
  ForecastRun run = rolling_evaluate(x, options);
  CHECK(run.metrics.pmad == 0.0);
  CHECK(run.metrics.oa == 1.0);
}

TEST_CASE("metrics window restricts the scored steps") {
  GeneratorSpec spec;
  spec.kind = GenKind::ar1;
  spec.phi = 0.3;
  spec.n = 160;
  spec.seed = 73;
  std::vector<double> x = generate(spec);
  for (double& v : x) v = std::floor(30.0 + 5.0 * v);
  RollingOptions options;
  options.family = ModelFamily::arma;
  options.select.max_p = 1;
  options.select.max_q = 0;
  options.metrics_window = 20;
  options.exec = Exec::serial;
  ForecastRun run = rolling_evaluate(x, options);
  // All steps are still recorded; only the metrics are restricted.
  CHECK(run.steps.size() == 160 - 1 - 80 + 1);
}

TEST_CASE("LRD-aware family wins on fractional noise") {
  int farima_wins = 0;
  const int seeds = 3;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> x = farima_series(0.35, 240, 9000 + static_cast<std::uint64_t>(s));
    for (double& v : x) v = std::max(0.0, std::floor(50.0 + 12.0 * v));
    RollingOptions options;
    options.horizon = 1;
    options.select.max_p = 1;
    options.select.max_q = 1;
    options.family = ModelFamily::farima;
    const double farima_pmad = rolling_evaluate(x, options).metrics.pmad;
    options.family = ModelFamily::arma;
    const double arma_pmad = rolling_evaluate(x, options).metrics.pmad;
    if (farima_pmad < arma_pmad) ++farima_wins;
  }
  CHECK(farima_wins >= 2);
}
