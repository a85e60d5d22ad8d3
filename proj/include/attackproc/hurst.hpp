#ifndef ATTACKPROC_HURST_HPP
#define ATTACKPROC_HURST_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "attackproc/exec.hpp"

namespace attackproc {

enum class HurstMethod { rs, agv, peng, per, box, wave };
inline constexpr std::size_t kHurstMethodCount = 6;
const char* hurst_method_name(HurstMethod m);

struct HurstEstimate {
  HurstMethod method = HurstMethod::rs;
  double h_value = 0.0;  // preserved even when outside [0,1]
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::pair<double, double>> regression_points;  // (log x, log y)
};

struct HurstOptions {
  std::size_t grid_points = 20;   // log-spaced block sizes, min_block..n/4
  std::size_t min_block = 8;
  std::vector<std::size_t> block_grid_override;  // exact block sizes if set
  double lowfreq_fraction = 0.10;    // periodogram regression band
  std::size_t min_lowfreq_points = 10;
  std::size_t box_count = 60;        // boxed-periodogram boxes
  std::size_t min_wave_coeffs = 32;  // per-scale coefficient floor
  // Spurious screen knobs.
  double penalty_factor = 2.0;      // threshold = factor * sigma * sqrt(2 ln n)
  double trend_r2_threshold = 0.10;
  double band_low = 0.6;  // h_bar band that suggests LRD
  double band_high = 1.0;
};

HurstEstimate hurst_rs(std::span<const double> series, const HurstOptions& options = {});
HurstEstimate hurst_agv(std::span<const double> series, const HurstOptions& options = {});
HurstEstimate hurst_peng(std::span<const double> series, const HurstOptions& options = {});
HurstEstimate hurst_per(std::span<const double> series, const HurstOptions& options = {});
HurstEstimate hurst_box(std::span<const double> series, const HurstOptions& options = {});
HurstEstimate hurst_wave(std::span<const double> series, const HurstOptions& options = {});

// Periodogram I(lambda_k) = |sum_j x_j e^{i j lambda_k}|^2 / (2 pi n) at the
// Fourier frequencies lambda_k = 2 pi k / n, k = 1..floor(n/2).
std::vector<double> periodogram(std::span<const double> series);

struct SpuriousScreen {
  bool changepoint_detected = false;
  std::size_t changepoint_location = 0;  // split index into [0,k) / [k,n)
  bool trend_detected = false;
  double h_after_adjustment = 0.0;  // h_bar after removing the fitted structure
};

enum class LrdVerdict { lrd, spurious_lrd, not_lrd };
const char* lrd_verdict_name(LrdVerdict v);

struct MethodOutcome {
  std::optional<HurstEstimate> estimate;
  std::string error;  // set when the method was unavailable
};

struct HurstReport {
  std::array<MethodOutcome, kHurstMethodCount> methods;
  double h_bar = 0.0;        // mean of the available estimates
  std::size_t methods_used = 0;
  bool few_methods = false;  // fewer than 4 estimates available
  bool lrd_candidate = false;
  bool spurious = false;
  std::optional<SpuriousScreen> screen;
  LrdVerdict verdict = LrdVerdict::not_lrd;
};

// Runs every estimator (in parallel under Exec::parallel; results are
// independent of evaluation order), averages the available values, and runs
// the spurious screen only for candidates in [band_low, band_high].
HurstReport hurst_all(std::span<const double> series, const HurstOptions& options = {},
                      Exec exec = Exec::parallel);

// Non-stationarity screen for candidate LRD series: a CUSUM change-point
// test studentized by a long-run block scale, plus a detrend-and-re-estimate
// arm for smooth trends.
SpuriousScreen spurious_screen(std::span<const double> series,
                               const HurstOptions& options = {},
                               Exec exec = Exec::parallel);

}  // namespace attackproc

#endif
