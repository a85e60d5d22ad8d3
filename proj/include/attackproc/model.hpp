#ifndef ATTACKPROC_MODEL_HPP
#define ATTACKPROC_MODEL_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "attackproc/exec.hpp"

namespace attackproc {

enum class ModelFamily { arma, farima };
const char* model_family_name(ModelFamily f);

// Fractional differencing (1-B)^d applied with the binomial weights
// pi_0 = 1, pi_j = pi_{j-1} (j-1-d)/j, truncated at the series start.
std::vector<double> fracdiff(std::span<const double> series, double d);

// The first `count` weights of (1-B)^d.
std::vector<double> fracdiff_weights(double d, std::size_t count);

struct ArmaModel {
  int p = 0, q = 0;
  std::vector<double> phi, theta;
  double mean = 0.0;
  double sigma2 = 0.0;
  double aic = 0.0;
  bool converged = false;
};

struct FarimaModel {
  int p = 0, q = 0;
  double d = 0.0;
  std::vector<double> phi, theta;
  double mean = 0.0;
  double sigma2 = 0.0;
  double aic = 0.0;
  bool converged = false;
};

struct FitOptions {
  int max_evals = 500;
  int restarts = 3;
  double f_tol = 1e-10;
  std::uint64_t seed = 0x5eedULL;  // jitter stream for restarts
  std::vector<double> warm_start;  // unconstrained parameters to start from
};

// Conditional-sum-of-squares fits. The optimizer works in an unconstrained
// space mapped through partial autocorrelations, so every iterate is causal
// and invertible. Failure to converge is reported, not thrown.
ArmaModel fit_arma(std::span<const double> series, int p, int q, const FitOptions& = {});
FarimaModel fit_farima(std::span<const double> series, int p, int q, const FitOptions& = {});

// Residual sum of squares of the CSS innovation recursion on a centered
// (and, for FARIMA, fractionally differenced) series.
double css_rss(std::span<const double> centered, std::span<const double> phi,
               std::span<const double> theta);

// Levinson-Durbin map from partial autocorrelations to AR/MA coefficients
// and its inverse. The inverse returns false when the coefficients are not
// causal/invertible (some |pacf| >= 1).
std::vector<double> pacf_to_coefficients(std::span<const double> pacf);
bool coefficients_to_pacf(std::span<const double> coefficients, std::vector<double>& pacf);

// Minimum-mean-square h-step forecasts with future innovations set to zero,
// floored at zero since attack rates are counts.
double forecast_arma(const ArmaModel& model, std::span<const double> history, int h);
double forecast_farima(const FarimaModel& model, std::span<const double> history, int h,
                       std::size_t ar_truncation = 1000);

struct SelectOptions {
  int max_p = 4;
  int max_q = 4;
  // AIC differences at or below this count as ties, resolved toward the
  // smaller (p+q, p). 2.0 is one parameter's worth of penalty.
  double aic_tie_tolerance = 2.0;
  FitOptions fit;
};

struct SelectedModel {
  ModelFamily family = ModelFamily::arma;
  ArmaModel arma;
  FarimaModel farima;

  int p() const { return family == ModelFamily::arma ? arma.p : farima.p; }
  int q() const { return family == ModelFamily::arma ? arma.q : farima.q; }
  double d() const { return family == ModelFamily::arma ? 0.0 : farima.d; }
  double aic() const { return family == ModelFamily::arma ? arma.aic : farima.aic; }
  double forecast(std::span<const double> history, int h) const {
    return family == ModelFamily::arma ? forecast_arma(arma, history, h)
                                       : forecast_farima(farima, history, h);
  }
};

// Optional cross-call state: best unconstrained parameters per (p, q), used
// by the rolling harness to warm-start the next step's fits.
using WarmStarts = std::map<std::pair<int, int>, std::vector<double>>;

// Fits every (p, q) candidate in the grid and returns the converged model
// with the lowest AIC; ties prefer smaller p+q, then smaller p. Candidates
// whose length requirement fails are skipped. Throws AllDiverged when no
// candidate converges.
SelectedModel select_best(std::span<const double> series, ModelFamily family,
                          const SelectOptions& options = {}, Exec exec = Exec::parallel,
                          WarmStarts* warm = nullptr);

}  // namespace attackproc

#endif
