#include <doctest.h>

#include <cmath>
#include <vector>

#include "attackproc/errors.hpp"
#include "attackproc/gpd.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/simulate.hpp"

using namespace attackproc;

namespace {

std::vector<double> gpd_data(double xi, double beta, std::size_t n, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GenKind::gpd_sample;
  spec.xi = xi;
  spec.beta = beta;
  spec.n = n;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_CASE("exponential data fits with shape near zero") {
  Rng rng(5);
  std::vector<double> data(20000);
  for (double& v : data) v = rng.exponential(1.0);
  GpdFit fit = fit_gpd(data);
  CHECK(fit.converged);
  CHECK(fit.xi > -0.1);
  CHECK(fit.xi < 0.1);
}

TEST_CASE("heavy GPD shape is recovered from 2000 exceedances") {
  // threshold quantile 0.9 over 20000 points leaves ~2000 exceedances
  std::vector<double> data = gpd_data(0.7, 1.0, 20000, 6);
  GpdFit fit = fit_gpd(data);
  CHECK(fit.converged);
  CHECK(fit.n_exceed >= 1900);
  CHECK(fit.xi > 0.6);
  CHECK(fit.xi < 0.8);
}

TEST_CASE("uniform data yields a negative shape") {
  Rng rng(7);
  std::vector<double> data(5000);
  for (double& v : data) v = rng.uniform01();
  GpdFit fit = fit_gpd(data);
  CHECK(fit.xi < 0.0);
}

TEST_CASE("too few exceedances raises") {
  Rng rng(8);
  std::vector<double> data(200);
  for (double& v : data) v = rng.exponential(1.0);
  CHECK_THROWS_AS(fit_gpd(data), DataError);  // 200 * 0.1 = 20 < 50
}

TEST_CASE("scale equivariance: data scaled by c scales beta, not xi") {
  std::vector<double> data = gpd_data(0.4, 2.0, 8000, 9);
  GpdFit a = fit_gpd(data);
  std::vector<double> scaled(data);
  for (double& v : scaled) v *= 10.0;
  GpdFit b = fit_gpd(scaled);
  CHECK(a.xi == doctest::Approx(b.xi).epsilon(1e-3));
  CHECK(10.0 * a.beta == doctest::Approx(b.beta).epsilon(1e-3));
}

TEST_CASE("returned optimum beats random feasible points") {
  std::vector<double> data = gpd_data(0.5, 1.5, 6000, 10);
  GpdFit fit = fit_gpd(data);
  std::vector<double> sorted(data);
  std::sort(sorted.begin(), sorted.end());
  const double u = fit.threshold;
  std::vector<double> exceedances;
  for (double v : sorted) {
    if (v > u) exceedances.push_back(v - u);
  }
  const double optimum = gpd_negloglik(exceedances, fit.xi, fit.beta);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const double xi = rng.uniform01() * 2.0 - 0.5;
    const double beta = 0.1 + rng.uniform01() * 5.0;
    CHECK(optimum <= gpd_negloglik(exceedances, xi, beta) + 1e-6);
  }
}

TEST_CASE("classification table is exhaustive in (xi, se, converged)") {
  auto make = [](double xi, double se, bool converged) {
    GpdFit fit;
    fit.xi = xi;
    fit.se_xi = se;
    fit.beta = 1.0;
    fit.converged = converged;
    return fit;
  };
  // Shape clearly in (0.5, 1): infinite variance.
  CHECK(classify_tail(make(0.7, 0.05, true)).regime == TailRegime::infinite_variance);
  CHECK(classify_tail(make(0.7, 0.05, true)).heavy);
  // Shape at or above 1: infinite mean.
  CHECK(classify_tail(make(1.2, 0.05, true)).regime == TailRegime::infinite_mean);
  CHECK(classify_tail(make(1.0, 0.05, true)).regime == TailRegime::infinite_mean);
  // Shape in (0, 0.5]: finite variance.
  CHECK(classify_tail(make(0.3, 0.05, true)).regime == TailRegime::finite_variance);
  CHECK(classify_tail(make(0.5, 0.05, true)).regime == TailRegime::finite_variance);
  // Positive but not significant: not heavy.
  CHECK_FALSE(classify_tail(make(0.05, 0.1, true)).heavy);
  CHECK(classify_tail(make(0.05, 0.1, true)).regime == TailRegime::not_heavy);
  // Negative or zero shape: not heavy.
  CHECK(classify_tail(make(-0.2, 0.01, true)).regime == TailRegime::not_heavy);
  CHECK(classify_tail(make(0.0, 0.01, true)).regime == TailRegime::not_heavy);
  // Diverged fit: not heavy regardless of shape.
  CHECK(classify_tail(make(0.9, 0.01, false)).regime == TailRegime::not_heavy);
  // Gate sits exactly at xi - z se > 0.
  CHECK_FALSE(classify_tail(make(0.1645, 0.1, true)).heavy);
  CHECK(classify_tail(make(0.17, 0.1, true), 1.645).heavy);
}
