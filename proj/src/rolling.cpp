#include "attackproc/rolling.hpp"

#include <cmath>

#include "attackproc/errors.hpp"

namespace attackproc {

AccuracyReport accuracy(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.empty() || observed.size() != predicted.size()) {
    throw_data_error(ErrorCode::empty_input, "need equal-length non-empty sequences");
  }
  double abs_err = 0.0, total = 0.0;
  double under_err = 0.0, under_total = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = observed[i] - predicted[i];
    abs_err += std::abs(e);
    total += observed[i];
    if (e > 0.0) {
      under_err += e;
      under_total += observed[i];
    }
  }
  if (total <= 0.0) {
    throw_data_error(ErrorCode::zero_denominator, "observed values sum to zero");
  }
  AccuracyReport report;
  report.pmad = abs_err / total;
  report.pmad_prime = under_total > 0.0 ? under_err / under_total : 0.0;
  report.oa = 1.0 - report.pmad;
  report.ua = 1.0 - report.pmad_prime;
  return report;
}

ForecastRun rolling_evaluate(std::span<const double> series, const RollingOptions& options) {
  const std::size_t n = series.size();
  const auto h = static_cast<std::size_t>(options.horizon);
  if (options.horizon < 1 || options.start_fraction <= 0.0 || options.start_fraction >= 1.0) {
    throw_data_error(ErrorCode::bad_value, "horizon must be >= 1 and start fraction in (0,1)");
  }
  const auto start = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * options.start_fraction));
  if (start < 1 || start + h > n) {
    throw_data_error(ErrorCode::too_short, "series too short for the requested evaluation");
  }

  ForecastRun run;
  run.family = options.family;
  run.horizon = options.horizon;
  run.start_fraction = options.start_fraction;

  WarmStarts warm;
  for (std::size_t t = start; t + h <= n; ++t) {
    std::span<const double> prefix = series.subspan(0, t);
    SelectedModel model;
    try {
      model = select_best(prefix, options.family, options.select, options.exec, &warm);
    } catch (const DataError&) {
      run.skipped.push_back(t);
      continue;
    }
    ForecastStep step;
    step.t = t;
    step.p = model.p();
    step.q = model.q();
    step.d = model.d();
    step.predicted = model.forecast(prefix, options.horizon);
    step.observed = series[t + h - 1];
    step.error = step.observed - step.predicted;
    run.steps.push_back(step);
  }
  if (run.steps.empty()) {
    throw_data_error(ErrorCode::all_diverged, "every rolling step was skipped");
  }

  std::vector<double> observed, predicted;
  for (const ForecastStep& s : run.steps) {
    if (options.metrics_window && s.t + h + *options.metrics_window <= n) continue;
    observed.push_back(s.observed);
    predicted.push_back(s.predicted);
  }
  if (observed.empty()) {
    throw_data_error(ErrorCode::empty_input, "metrics window excludes every recorded step");
  }
  run.metrics = accuracy(observed, predicted);
  return run;
}

}  // namespace attackproc
