#include "attackproc/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "attackproc/errors.hpp"
#include "attackproc/nelder_mead.hpp"
#include "attackproc/rng.hpp"

namespace attackproc {

const char* tail_regime_name(TailRegime r) {
  switch (r) {
    case TailRegime::not_heavy: return "NOT_HEAVY";
    case TailRegime::finite_variance: return "FINITE_VARIANCE";
    case TailRegime::infinite_variance: return "INFINITE_VARIANCE";
    case TailRegime::infinite_mean: return "INFINITE_MEAN";
  }
  return "?";
}

double gpd_negloglik(std::span<const double> exceedances, double xi, double beta) {
  if (beta <= 0.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(exceedances.size());
  if (std::abs(xi) < 1e-6) {
    double sum = 0.0;
    for (double y : exceedances) sum += y;
    return n * std::log(beta) + sum / beta;
  }
  double total = n * std::log(beta);
  const double factor = 1.0 + 1.0 / xi;
  for (double y : exceedances) {
    const double z = 1.0 + xi * y / beta;
    if (z <= 0.0) return std::numeric_limits<double>::infinity();
    total += factor * std::log(z);
  }
  return total;
}

namespace {

// Probability-weighted-moments starting point (a0 = mean, a1 from the
// plotting positions), clamped into the optimizer's feasible box.
void pwm_start(std::span<const double> sorted_exceedances, double& xi, double& beta) {
  const std::size_t n = sorted_exceedances.size();
  const double nd = static_cast<double>(n);
  double a0 = 0.0, a1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a0 += sorted_exceedances[i];
    const double weight = 1.0 - (static_cast<double>(i) + 0.65) / nd;
    a1 += sorted_exceedances[i] * weight;
  }
  a0 /= nd;
  a1 /= nd;
  const double denom = a0 - 2.0 * a1;
  if (denom <= 0.0 || a0 <= 0.0) {
    xi = 0.1;
    beta = std::max(a0, 1e-12);
    return;
  }
  xi = 2.0 - a0 / denom;
  beta = 2.0 * a0 * a1 / denom;
  xi = std::clamp(xi, -0.9, 5.0);
  if (!(beta > 0.0)) beta = std::max(a0, 1e-12);
}

}  // namespace

GpdFit fit_gpd(std::span<const double> values, const GpdOptions& options) {
  if (values.empty()) {
    throw_data_error(ErrorCode::empty_input, "no data for tail fit");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto idx = static_cast<std::size_t>(
      options.threshold_quantile * static_cast<double>(sorted.size()));
  const double u = sorted[std::min(idx, sorted.size() - 1)];

  std::vector<double> exceedances;
  for (double v : sorted) {
    if (v > u) exceedances.push_back(v - u);
  }
  if (exceedances.size() < options.min_exceedances) {
    throw_data_error(ErrorCode::too_few_exceedances,
                     "only " + std::to_string(exceedances.size()) + " exceedances above " +
                         std::to_string(u) + ", need " +
                         std::to_string(options.min_exceedances));
  }

  GpdFit fit;
  fit.threshold = u;
  fit.n_exceed = exceedances.size();

  // Optimize over (xi, log beta) so the scale stays positive; the likelihood
  // support constraint is enforced through the +infinity penalty.
  auto objective = [&](std::span<const double> raw) {
    const double xi = std::clamp(raw[0], -0.99, 10.0);
    return gpd_negloglik(exceedances, xi, std::exp(std::clamp(raw[1], -60.0, 60.0)));
  };

  double xi0, beta0;
  pwm_start(exceedances, xi0, beta0);

  NelderMeadOptions nm;
  nm.max_evals = options.max_evals;
  nm.f_tol = 1e-10;

  Rng jitter(mix_seed(options.seed));
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_raw = {xi0, std::log(beta0)};
  bool converged = false;
  for (int attempt = 0; attempt < std::max(1, options.restarts); ++attempt) {
    std::vector<double> start = {xi0, std::log(beta0)};
    if (attempt > 0) {
      start[0] += jitter.uniform01() - 0.5;
      start[1] += jitter.uniform01() - 0.5;
    }
    NelderMeadResult r = nelder_mead(objective, start, nm);
    if (r.fx < best_value) {
      best_value = r.fx;
      best_raw = r.x;
    }
    if (r.converged && std::isfinite(r.fx)) converged = true;
  }

  fit.xi = std::clamp(best_raw[0], -0.99, 10.0);
  fit.beta = std::exp(std::clamp(best_raw[1], -60.0, 60.0));
  fit.converged = converged && std::isfinite(best_value);

  // Standard error of xi from the numerical observed information.
  const double h_xi = 1e-4 * std::max(1.0, std::abs(fit.xi));
  const double h_beta = 1e-4 * fit.beta;
  auto nll = [&](double xi, double beta) { return gpd_negloglik(exceedances, xi, beta); };
  const double f0 = nll(fit.xi, fit.beta);
  const double dxx =
      (nll(fit.xi + h_xi, fit.beta) - 2.0 * f0 + nll(fit.xi - h_xi, fit.beta)) / (h_xi * h_xi);
  const double dbb = (nll(fit.xi, fit.beta + h_beta) - 2.0 * f0 +
                      nll(fit.xi, fit.beta - h_beta)) /
                     (h_beta * h_beta);
  const double dxb = (nll(fit.xi + h_xi, fit.beta + h_beta) - nll(fit.xi + h_xi, fit.beta - h_beta) -
                      nll(fit.xi - h_xi, fit.beta + h_beta) + nll(fit.xi - h_xi, fit.beta - h_beta)) /
                     (4.0 * h_xi * h_beta);
  const double det = dxx * dbb - dxb * dxb;
  if (std::isfinite(det) && det > 0.0 && dbb > 0.0) {
    fit.se_xi = std::sqrt(dbb / det);
  } else {
    fit.se_xi = std::numeric_limits<double>::quiet_NaN();
    fit.converged = false;
  }
  return fit;
}

TailClassification classify_tail(const GpdFit& fit, double z) {
  TailClassification c;
  c.heavy = fit.converged && fit.xi > 0.0 && std::isfinite(fit.se_xi) &&
            fit.xi - z * fit.se_xi > 0.0;
  if (!c.heavy) {
    c.regime = TailRegime::not_heavy;
  } else if (fit.xi >= 1.0) {
    c.regime = TailRegime::infinite_mean;
  } else if (fit.xi > 0.5) {
    c.regime = TailRegime::infinite_variance;
  } else {
    c.regime = TailRegime::finite_variance;
  }
  return c;
}

}  // namespace attackproc
