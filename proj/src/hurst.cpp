#include "attackproc/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attackproc/errors.hpp"
#include "attackproc/fft.hpp"
#include "attackproc/stats.hpp"

namespace attackproc {

const char* hurst_method_name(HurstMethod m) {
  switch (m) {
    case HurstMethod::rs: return "RS";
    case HurstMethod::agv: return "AGV";
    case HurstMethod::peng: return "PENG";
    case HurstMethod::per: return "PER";
    case HurstMethod::box: return "BOX";
    case HurstMethod::wave: return "WAVE";
  }
  return "?";
}

const char* lrd_verdict_name(LrdVerdict v) {
  switch (v) {
    case LrdVerdict::lrd: return "LRD";
    case LrdVerdict::spurious_lrd: return "SPURIOUS_LRD";
    case LrdVerdict::not_lrd: return "NOT_LRD";
  }
  return "?";
}

namespace {

void require_usable(std::span<const double> series, std::size_t min_length) {
  if (series.size() < min_length) {
    throw_data_error(ErrorCode::too_short,
                     "need at least " + std::to_string(min_length) + " observations, have " +
                         std::to_string(series.size()));
  }
  const double first = series.front();
  for (double v : series) {
    if (v != first) return;
  }
  throw_data_error(ErrorCode::zero_variance, "constant series");
}

std::vector<std::size_t> block_grid(std::size_t n, const HurstOptions& options,
                                    std::size_t max_block) {
  if (!options.block_grid_override.empty()) return options.block_grid_override;
  const double lo = std::log(static_cast<double>(options.min_block));
  const double hi = std::log(static_cast<double>(max_block));
  std::vector<std::size_t> grid;
  for (std::size_t i = 0; i < options.grid_points; ++i) {
    const double f = options.grid_points == 1
                         ? 0.0
                         : static_cast<double>(i) / static_cast<double>(options.grid_points - 1);
    const auto m = static_cast<std::size_t>(std::llround(std::exp(lo + f * (hi - lo))));
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  (void)n;
  return grid;
}

HurstEstimate finish(HurstMethod method, std::vector<std::pair<double, double>> points,
                     double h_from_slope_scale, double h_from_slope_offset) {
  if (points.size() < 4) {
    throw_data_error(ErrorCode::too_short, "fewer than 4 usable regression points");
  }
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    xs[i] = points[i].first;
    ys[i] = points[i].second;
  }
  const LineFit fit = fit_line(xs, ys);
  HurstEstimate est;
  est.method = method;
  est.slope = fit.slope;
  est.intercept = fit.intercept;
  est.h_value = h_from_slope_offset + h_from_slope_scale * fit.slope;
  est.regression_points = std::move(points);
  return est;
}

}  // namespace

HurstEstimate hurst_rs(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 64);
  const std::size_t n = series.size();
  std::vector<std::pair<double, double>> points;
  for (std::size_t m : block_grid(n, options, n / 4)) {
    const std::size_t blocks = n / m;
    if (blocks == 0) continue;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      const double* x = series.data() + b * m;
      double sum = 0.0, sum_sq = 0.0;
      double min_dev = 0.0, max_dev = 0.0;  // deviation is 0 at t = 0
      // First pass for the block totals.
      for (std::size_t t = 0; t < m; ++t) {
        sum += x[t];
        sum_sq += x[t] * x[t];
      }
      const double md = static_cast<double>(m);
      const double variance = sum_sq / md - (sum / md) * (sum / md);
      if (variance <= 0.0) continue;
      const double sd = std::sqrt(variance);
      double partial = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        partial += x[t];
        const double dev = partial - (static_cast<double>(t + 1) / md) * sum;
        min_dev = std::min(min_dev, dev);
        max_dev = std::max(max_dev, dev);
      }
      total += (max_dev - min_dev) / sd;
      ++used;
    }
    if (used == 0) continue;
    const double mean_rs = total / static_cast<double>(used);
    if (mean_rs > 0.0) {
      points.emplace_back(std::log(static_cast<double>(m)), std::log(mean_rs));
    }
  }
  // E[R/S(m)] ~ C m^H: H is the slope itself.
  return finish(HurstMethod::rs, std::move(points), 1.0, 0.0);
}

HurstEstimate hurst_agv(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 64);
  const std::size_t n = series.size();
  std::vector<std::pair<double, double>> points;
  // The sample variance over K correlated block means is biased low; keeping
  // K >= 16 bounds that bias at strong long memory.
  for (std::size_t m : block_grid(n, options, std::max<std::size_t>(n / 16, options.min_block * 2))) {
    const std::size_t blocks = n / m;
    if (blocks < 2) continue;
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      double sum = 0.0;
      for (std::size_t t = 0; t < m; ++t) sum += series[b * m + t];
      means[b] = sum / static_cast<double>(m);
    }
    const double variance = sample_variance(means);
    if (variance > 0.0) {
      points.emplace_back(std::log(static_cast<double>(m)), std::log(variance));
    }
  }
  // Var(X^(m)) ~ c m^{2H-2}: slope is 2H-2.
  return finish(HurstMethod::agv, std::move(points), 0.5, 1.0);
}

HurstEstimate hurst_peng(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 64);
  const std::size_t n = series.size();
  std::vector<std::pair<double, double>> points;
  std::vector<double> partial;
  std::vector<double> index;
  for (std::size_t m : block_grid(n, options, n / 4)) {
    const std::size_t blocks = n / m;
    if (blocks == 0) continue;
    partial.resize(m);
    index.resize(m);
    for (std::size_t t = 0; t < m; ++t) index[t] = static_cast<double>(t + 1);
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      double run = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        run += series[b * m + t];
        partial[t] = run;
      }
      const LineFit fit = fit_line(index, partial);
      double rss = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double r = partial[t] - (fit.intercept + fit.slope * index[t]);
        rss += r * r;
      }
      total += rss / static_cast<double>(m);
      ++used;
    }
    if (used == 0) continue;
    const double mean_resid_var = total / static_cast<double>(used);
    if (mean_resid_var > 0.0) {
      points.emplace_back(std::log(static_cast<double>(m)), std::log(mean_resid_var));
    }
  }
  // Averaged residual variance ~ m^{2H}: slope is 2H.
  return finish(HurstMethod::peng, std::move(points), 0.5, 0.0);
}

std::vector<double> periodogram(std::span<const double> series) {
  const std::size_t n = series.size();
  const double mean = sample_mean(series);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;
  const std::vector<double> power = power_spectrum(centered);
  std::vector<double> intensity(n / 2);
  const double scale = 1.0 / (2.0 * M_PI * static_cast<double>(n));
  for (std::size_t k = 1; k <= n / 2; ++k) {
    intensity[k - 1] = power[k] * scale;
  }
  return intensity;
}

HurstEstimate hurst_per(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 64);
  const std::size_t n = series.size();
  const std::vector<double> intensity = periodogram(series);
  const std::size_t total = intensity.size();
  std::size_t cut = std::max(options.min_lowfreq_points,
                             static_cast<std::size_t>(options.lowfreq_fraction *
                                                      static_cast<double>(total)));
  cut = std::min(cut, total);
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 1; k <= cut; ++k) {
    const double value = intensity[k - 1];
    if (value <= 0.0) continue;
    const double lambda = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    points.emplace_back(std::log(lambda), std::log(value));
  }
  // I(lambda) ~ lambda^{1-2H} near zero: slope is 1-2H.
  return finish(HurstMethod::per, std::move(points), -0.5, 0.5);
}

HurstEstimate hurst_box(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 64);
  const std::size_t n = series.size();
  const std::vector<double> intensity = periodogram(series);
  const std::size_t total = intensity.size();
  const double log_lo = std::log(2.0 * M_PI / static_cast<double>(n));
  const double log_hi = std::log(2.0 * M_PI * static_cast<double>(total) /
                                 static_cast<double>(n));
  const double width = (log_hi - log_lo) / static_cast<double>(options.box_count);

  std::vector<double> sum_x(options.box_count, 0.0);
  std::vector<double> sum_y(options.box_count, 0.0);
  std::vector<std::size_t> count(options.box_count, 0);
  for (std::size_t k = 1; k <= total; ++k) {
    const double value = intensity[k - 1];
    if (value <= 0.0) continue;
    const double lx = std::log(2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n));
    auto box = static_cast<std::size_t>((lx - log_lo) / width);
    if (box >= options.box_count) box = options.box_count - 1;
    sum_x[box] += lx;
    sum_y[box] += std::log(value);
    ++count[box];
  }
  std::vector<std::pair<double, double>> points;
  for (std::size_t b = 0; b < options.box_count; ++b) {
    if (count[b] == 0) continue;  // empty boxes are skipped
    points.emplace_back(sum_x[b] / static_cast<double>(count[b]),
                        sum_y[b] / static_cast<double>(count[b]));
  }
  return finish(HurstMethod::box, std::move(points), -0.5, 0.5);
}

namespace {

// Daubechies-4 analysis filters (two vanishing moments).
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kDb4Norm = 5.656854249492381;  // 4 sqrt(2)
const double kScaling[4] = {(1.0 + kSqrt3) / kDb4Norm, (3.0 + kSqrt3) / kDb4Norm,
                            (3.0 - kSqrt3) / kDb4Norm, (1.0 - kSqrt3) / kDb4Norm};

}  // namespace

HurstEstimate hurst_wave(std::span<const double> series, const HurstOptions& options) {
  require_usable(series, 256);
  double wavelet[4];
  for (int k = 0; k < 4; ++k) {
    wavelet[k] = (k % 2 == 0 ? 1.0 : -1.0) * kScaling[3 - k];
  }

  std::vector<double> approx(series.begin(), series.end());
  std::vector<std::pair<double, double>> points;
  std::size_t level = 0;
  while (approx.size() / 2 >= options.min_wave_coeffs) {
    const std::size_t half = approx.size() / 2;
    const std::size_t len = half * 2;  // periodic extension over an even length
    std::vector<double> next(half);
    double energy = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      double smooth = 0.0, detail = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double v = approx[(2 * i + k) % len];
        smooth += kScaling[k] * v;
        detail += wavelet[k] * v;
      }
      next[i] = smooth;
      energy += detail * detail;
    }
    ++level;
    const double mean_energy = energy / static_cast<double>(half);
    if (mean_energy > 0.0) {
      points.emplace_back(static_cast<double>(level), std::log2(mean_energy));
    }
    approx = std::move(next);
  }
  if (points.size() < 3) {
    throw_data_error(ErrorCode::too_short, "not enough wavelet scales");
  }
  // Mean detail energy ~ 2^{j(2H-1)}: slope of log2 energy on octave is 2H-1.
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    xs[i] = points[i].first;
    ys[i] = points[i].second;
  }
  const LineFit fit = fit_line(xs, ys);
  HurstEstimate est;
  est.method = HurstMethod::wave;
  est.slope = fit.slope;
  est.intercept = fit.intercept;
  est.h_value = 0.5 * (fit.slope + 1.0);
  est.regression_points = std::move(points);
  return est;
}

namespace {

using EstimatorFn = HurstEstimate (*)(std::span<const double>, const HurstOptions&);

constexpr EstimatorFn kEstimators[kHurstMethodCount] = {hurst_rs,  hurst_agv, hurst_peng,
                                                        hurst_per, hurst_box, hurst_wave};

// h_bar over whichever estimators succeed; empty optional when none do.
struct HBar {
  std::array<MethodOutcome, kHurstMethodCount> methods;
  double value = 0.0;
  std::size_t used = 0;
};

HBar estimate_all(std::span<const double> series, const HurstOptions& options, Exec exec) {
  HBar out;
  for_each_index(kHurstMethodCount, exec, [&](std::size_t i) {
    try {
      out.methods[i].estimate = kEstimators[i](series, options);
    } catch (const DataError& e) {
      out.methods[i].error = e.what();
    }
  });
  double sum = 0.0;
  for (const MethodOutcome& m : out.methods) {
    if (m.estimate) {
      sum += m.estimate->h_value;
      ++out.used;
    }
  }
  out.value = out.used > 0 ? sum / static_cast<double>(out.used) : 0.0;
  return out;
}

double h_bar_of(std::span<const double> series, const HurstOptions& options, Exec exec) {
  return estimate_all(series, options, exec).value;
}

// Max absolute CUSUM of the mean, sqrt(n) scaling, plus the argmax split.
std::pair<double, std::size_t> cusum_peak(std::span<const double> x) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (double v : x) total += v;
  double best = 0.0;
  std::size_t where = 0;
  double partial = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    partial += x[k - 1];
    const double dev = std::abs(partial - (static_cast<double>(k) / static_cast<double>(n)) * total);
    if (dev > best) {
      best = dev;
      where = k;
    }
  }
  return {best / std::sqrt(static_cast<double>(n)), where};
}

// Long-run scale sqrt(m Var(block means)) of the series after removing the
// candidate step. Grows with genuine long memory, so the CUSUM threshold
// self-adjusts and stationary LRD series are rarely flagged.
double longrun_scale(std::span<const double> x, std::size_t split) {
  const std::size_t n = x.size();
  std::vector<double> resid(x.begin(), x.end());
  if (split > 0 && split < n) {
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < split; ++i) left += x[i];
    for (std::size_t i = split; i < n; ++i) right += x[i];
    left /= static_cast<double>(split);
    right /= static_cast<double>(n - split);
    for (std::size_t i = 0; i < split; ++i) resid[i] -= left;
    for (std::size_t i = split; i < n; ++i) resid[i] -= right;
  }
  const auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const std::size_t blocks = n / std::max<std::size_t>(m, 1);
  if (m < 2 || blocks < 2) return std::sqrt(population_variance(resid));
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) sum += resid[b * m + t];
    means[b] = sum / static_cast<double>(m);
  }
  return std::sqrt(std::max(static_cast<double>(m) * sample_variance(means), 1e-300));
}

struct CusumDecision {
  bool detected = false;
  std::size_t location = 0;
};

CusumDecision cusum_test(std::span<const double> x, double factor) {
  if (x.size() < 16) return {};
  auto [stat, split] = cusum_peak(x);
  const double sigma = longrun_scale(x, split);
  const double threshold =
      factor * sigma * std::sqrt(2.0 * std::log(static_cast<double>(x.size())));
  return {stat > threshold, split};
}

// Least-squares quadratic in u = t/n; returns fitted values and R^2.
double fit_quadratic(std::span<const double> x, std::vector<double>& fitted) {
  const std::size_t n = x.size();
  double s[5] = {0, 0, 0, 0, 0};
  double b[3] = {0, 0, 0};
  for (std::size_t t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / static_cast<double>(n);
    double up = 1.0;
    for (int p = 0; p <= 4; ++p) {
      s[p] += up;
      if (p <= 2) b[p] += up * x[t];
      up *= u;
    }
  }
  // Solve the 3x3 normal equations by Gaussian elimination.
  double a[3][4] = {{s[0], s[1], s[2], b[0]}, {s[1], s[2], s[3], b[1]}, {s[2], s[3], s[4], b[2]}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col || a[col][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  double coeff[3];
  for (int i = 0; i < 3; ++i) coeff[i] = a[i][i] != 0.0 ? a[i][3] / a[i][i] : 0.0;

  fitted.resize(n);
  const double mean = sample_mean(x);
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / static_cast<double>(n);
    fitted[t] = coeff[0] + coeff[1] * u + coeff[2] * u * u;
    ss_tot += (x[t] - mean) * (x[t] - mean);
    ss_res += (x[t] - fitted[t]) * (x[t] - fitted[t]);
  }
  if (ss_tot <= 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

SpuriousScreen spurious_screen(std::span<const double> series, const HurstOptions& options,
                               Exec exec) {
  const std::size_t n = series.size();
  SpuriousScreen screen;

  // Change-point arm: binary segmentation, one split level.
  CusumDecision top = cusum_test(series, options.penalty_factor);
  if (top.detected) {
    screen.changepoint_detected = true;
    screen.changepoint_location = top.location;
  } else {
    auto [peak, split] = cusum_peak(series);
    (void)peak;
    for (auto half : {std::span<const double>(series.data(), split),
                      std::span<const double>(series.data() + split, n - split)}) {
      CusumDecision sub = cusum_test(half, options.penalty_factor);
      if (sub.detected) {
        screen.changepoint_detected = true;
        screen.changepoint_location =
            half.data() == series.data() ? sub.location : split + sub.location;
        break;
      }
    }
  }

  // Trend arm: remove a fitted low-order polynomial and re-estimate.
  std::vector<double> trend;
  const double r2 = fit_quadratic(series, trend);
  screen.trend_detected = r2 >= options.trend_r2_threshold;

  std::vector<double> adjusted(series.begin(), series.end());
  if (screen.changepoint_detected) {
    const std::size_t split = screen.changepoint_location;
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < split; ++i) left += series[i];
    for (std::size_t i = split; i < n; ++i) right += series[i];
    left /= static_cast<double>(std::max<std::size_t>(split, 1));
    right /= static_cast<double>(std::max<std::size_t>(n - split, 1));
    for (std::size_t i = 0; i < split; ++i) adjusted[i] -= left;
    for (std::size_t i = split; i < n; ++i) adjusted[i] -= right;
  } else if (screen.trend_detected) {
    for (std::size_t i = 0; i < n; ++i) adjusted[i] -= trend[i];
  }
  try {
    screen.h_after_adjustment = h_bar_of(adjusted, options, exec);
  } catch (const DataError&) {
    screen.h_after_adjustment = 0.0;
  }
  return screen;
}

HurstReport hurst_all(std::span<const double> series, const HurstOptions& options, Exec exec) {
  HurstReport report;
  HBar bar = estimate_all(series, options, exec);
  report.methods = std::move(bar.methods);
  report.methods_used = bar.used;
  if (bar.used == 0) {
    // Nothing to average; surface the first failure.
    for (const MethodOutcome& m : report.methods) {
      if (!m.error.empty()) throw DataError(ErrorCode::zero_variance, m.error);
    }
  }
  report.h_bar = bar.value;
  report.few_methods = bar.used < 4;
  report.lrd_candidate = report.h_bar >= options.band_low && report.h_bar <= options.band_high;
  if (report.lrd_candidate) {
    SpuriousScreen screen = spurious_screen(series, options, exec);
    report.spurious = screen.changepoint_detected ||
                      (screen.trend_detected && screen.h_after_adjustment < options.band_low);
    report.screen = screen;
  }
  if (report.lrd_candidate && !report.spurious) {
    report.verdict = LrdVerdict::lrd;
  } else if (report.lrd_candidate) {
    report.verdict = LrdVerdict::spurious_lrd;
  } else {
    report.verdict = LrdVerdict::not_lrd;
  }
  return report;
}

}  // namespace attackproc
