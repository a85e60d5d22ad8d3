#ifndef ATTACKPROC_ROLLING_HPP
#define ATTACKPROC_ROLLING_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "attackproc/model.hpp"

namespace attackproc {

struct AccuracyReport {
  double pmad = 0.0;
  double pmad_prime = 0.0;
  double oa = 0.0;  // 1 - pmad
  double ua = 0.0;  // 1 - pmad_prime
};

// PMAD = sum|e| / sum X over all steps; PMAD' uses only the underestimated
// steps (e > 0) in both numerator and denominator, 0 when there are none.
AccuracyReport accuracy(std::span<const double> observed, std::span<const double> predicted);

struct RollingOptions {
  ModelFamily family = ModelFamily::farima;
  int horizon = 1;
  double start_fraction = 0.5;
  // When set, the accuracy metrics cover only predictions that land in the
  // last `metrics_window` observations.
  std::optional<std::size_t> metrics_window;
  SelectOptions select;
  Exec exec = Exec::parallel;
};

struct ForecastStep {
  std::size_t t = 0;  // 1-based size of the prefix that was fit
  int p = 0, q = 0;
  double d = 0.0;
  double predicted = 0.0;
  double observed = 0.0;
  double error = 0.0;  // observed - predicted
};

struct ForecastRun {
  ModelFamily family = ModelFamily::farima;
  int horizon = 1;
  double start_fraction = 0.5;
  std::vector<ForecastStep> steps;
  std::vector<std::size_t> skipped;  // prefix sizes where no model converged
  AccuracyReport metrics;
};

// Rolling-origin evaluation: from t = floor(n p) while t <= n - h, select the
// best model on X_1..X_t, predict Y_{t+h}, record the error, advance by one.
// Non-converging steps are recorded as skipped; the run fails only when
// every step is skipped.
ForecastRun rolling_evaluate(std::span<const double> series, const RollingOptions& options);

}  // namespace attackproc

#endif
