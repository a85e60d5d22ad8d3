#include "attackproc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attackproc/errors.hpp"
#include "attackproc/nelder_mead.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/stats.hpp"

namespace attackproc {

const char* model_family_name(ModelFamily f) {
  return f == ModelFamily::arma ? "ARMA" : "FARIMA";
}

std::vector<double> fracdiff_weights(double d, std::size_t count) {
  std::vector<double> pi(count);
  if (count == 0) return pi;
  pi[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) {
    pi[j] = pi[j - 1] * (static_cast<double>(j) - 1.0 - d) / static_cast<double>(j);
  }
  return pi;
}

std::vector<double> fracdiff(std::span<const double> series, double d) {
  const std::size_t n = series.size();
  const std::vector<double> pi = fracdiff_weights(d, n);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= t; ++j) {
      acc += pi[j] * series[t - j];
    }
    out[t] = acc;
  }
  return out;
}

std::vector<double> pacf_to_coefficients(std::span<const double> pacf) {
  std::vector<double> coeff(pacf.begin(), pacf.end());
  std::vector<double> work(coeff);
  for (std::size_t j = 1; j < coeff.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      work[k] = coeff[k] - pacf[j] * coeff[j - 1 - k];
    }
    std::copy(work.begin(), work.begin() + static_cast<long>(j), coeff.begin());
  }
  return coeff;
}

bool coefficients_to_pacf(std::span<const double> coefficients, std::vector<double>& pacf) {
  std::vector<double> coeff(coefficients.begin(), coefficients.end());
  const std::size_t p = coeff.size();
  pacf.assign(p, 0.0);
  for (std::size_t j = p; j-- > 0;) {
    const double r = coeff[j];
    if (!(std::abs(r) < 1.0)) return false;
    pacf[j] = r;
    if (j == 0) break;
    std::vector<double> prev(j);
    const double denom = 1.0 - r * r;
    for (std::size_t k = 0; k < j; ++k) {
      prev[k] = (coeff[k] + r * coeff[j - 1 - k]) / denom;
    }
    coeff = std::move(prev);
  }
  return true;
}

double css_rss(std::span<const double> centered, std::span<const double> phi,
               std::span<const double> theta) {
  const std::size_t n = centered.size();
  const std::size_t p = phi.size();
  const std::size_t q = theta.size();
  std::vector<double> e(n, 0.0);
  // Conditions on zero pre-sample values so every order sums the same n
  // terms; otherwise large-p candidates get shorter sums and win AIC ties
  // they should lose.
  double rss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double value = centered[t];
    for (std::size_t i = 1; i <= p && i <= t; ++i) {
      value -= phi[i - 1] * centered[t - i];
    }
    for (std::size_t j = 1; j <= q && j <= t; ++j) {
      value -= theta[j - 1] * e[t - j];
    }
    e[t] = value;
    rss += value * value;
  }
  return rss;
}

namespace {

constexpr double kDBound = 0.49;

struct RawMapping {
  bool with_d = false;
  int p = 0, q = 0;

  std::size_t size() const { return static_cast<std::size_t>(with_d ? 1 + p + q : p + q); }

  // raw (unconstrained) -> constrained (d, phi, theta)
  void decode(std::span<const double> raw, double& d, std::vector<double>& phi,
              std::vector<double>& theta) const {
    std::size_t at = 0;
    d = with_d ? kDBound * std::tanh(raw[at++]) : 0.0;
    std::vector<double> pacf(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) pacf[static_cast<std::size_t>(i)] = std::tanh(raw[at++]);
    phi = pacf_to_coefficients(pacf);
    pacf.assign(static_cast<std::size_t>(q), 0.0);
    for (int j = 0; j < q; ++j) pacf[static_cast<std::size_t>(j)] = std::tanh(raw[at++]);
    theta = pacf_to_coefficients(pacf);
  }
};

double safe_atanh(double x) {
  const double clamped = std::clamp(x, -0.999999, 0.999999);
  return 0.5 * std::log((1.0 + clamped) / (1.0 - clamped));
}

struct CssProblem {
  std::span<const double> centered;
  RawMapping mapping;

  double operator()(std::span<const double> raw) const {
    double d;
    std::vector<double> phi, theta;
    mapping.decode(raw, d, phi, theta);
    std::vector<double> w;
    std::span<const double> input = centered;
    if (mapping.with_d) {
      w = fracdiff(centered, d);
      input = w;
    }
    return css_rss(input, phi, theta);
  }
};

struct CssFit {
  double d = 0.0;
  std::vector<double> phi, theta;
  std::vector<double> raw;
  double rss = 0.0;
  bool converged = false;
};

CssFit minimize_css(std::span<const double> centered, const RawMapping& mapping,
                    const FitOptions& options) {
  CssProblem problem{centered, mapping};
  CssFit fit;
  const std::size_t dim = mapping.size();
  if (dim == 0) {
    fit.rss = css_rss(centered, {}, {});
    fit.converged = true;
    return fit;
  }

  NelderMeadOptions nm;
  nm.max_evals = options.max_evals;
  nm.f_tol = options.f_tol;

  Rng jitter(mix_seed(options.seed));
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_raw;
  bool converged = false;
  for (int attempt = 0; attempt < std::max(1, options.restarts); ++attempt) {
    std::vector<double> start(dim, 0.0);
    if (attempt == 0 && options.warm_start.size() == dim) {
      start = options.warm_start;
    } else if (attempt > 0) {
      for (double& s : start) s = jitter.uniform01() - 0.5;
    }
    NelderMeadResult r = nelder_mead(
        [&](std::span<const double> raw) { return problem(raw); }, start, nm);
    if (r.fx < best_value) {
      best_value = r.fx;
      best_raw = r.x;
    }
    if (r.converged) {
      converged = true;
      break;
    }
  }

  mapping.decode(best_raw, fit.d, fit.phi, fit.theta);
  fit.raw = std::move(best_raw);
  fit.rss = best_value;
  fit.converged = converged;
  return fit;
}

std::vector<double> center(std::span<const double> series, double& mean) {
  mean = sample_mean(series);
  std::vector<double> centered(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) centered[i] = series[i] - mean;
  return centered;
}

void require_fittable(std::span<const double> series, int p, int q) {
  const std::size_t need = 30 + 5 * static_cast<std::size_t>(p + q);
  if (series.size() < need) {
    throw_data_error(ErrorCode::too_short, "need " + std::to_string(need) +
                                               " observations for orders (" + std::to_string(p) +
                                               "," + std::to_string(q) + ")");
  }
  if (p + q == 0) return;  // the mean-only model handles constant data
  const double first = series.front();
  for (double v : series) {
    if (v != first) return;
  }
  throw_data_error(ErrorCode::zero_variance, "constant series cannot be fit");
}

double aic_of(double rss, std::size_t n, int k) {
  const double sigma2 = std::max(rss / static_cast<double>(n), 1e-300);
  return static_cast<double>(n) * std::log(sigma2) + 2.0 * static_cast<double>(k);
}

}  // namespace

ArmaModel fit_arma(std::span<const double> series, int p, int q, const FitOptions& options) {
  require_fittable(series, p, q);
  ArmaModel model;
  model.p = p;
  model.q = q;
  std::vector<double> centered = center(series, model.mean);
  CssFit fit = minimize_css(centered, RawMapping{false, p, q}, options);
  model.phi = std::move(fit.phi);
  model.theta = std::move(fit.theta);
  model.sigma2 = fit.rss / static_cast<double>(series.size());
  model.aic = aic_of(fit.rss, series.size(), p + q + 1);
  model.converged = fit.converged;
  return model;
}

FarimaModel fit_farima(std::span<const double> series, int p, int q, const FitOptions& options) {
  require_fittable(series, p, q);
  FarimaModel model;
  model.p = p;
  model.q = q;
  std::vector<double> centered = center(series, model.mean);
  CssFit fit = minimize_css(centered, RawMapping{true, p, q}, options);
  model.d = fit.d;
  model.phi = std::move(fit.phi);
  model.theta = std::move(fit.theta);
  model.sigma2 = fit.rss / static_cast<double>(series.size());
  model.aic = aic_of(fit.rss, series.size(), p + q + 2);
  model.converged = fit.converged;
  return model;
}

double forecast_arma(const ArmaModel& model, std::span<const double> history, int h) {
  const std::size_t n = history.size();
  const std::size_t p = model.phi.size();
  const std::size_t q = model.theta.size();
  // Deviations from the mean, extended by the forecasts as they are made.
  std::vector<double> dev(n + static_cast<std::size_t>(h));
  for (std::size_t t = 0; t < n; ++t) dev[t] = history[t] - model.mean;
  std::vector<double> e(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double value = dev[t];
    for (std::size_t i = 1; i <= p && i <= t; ++i) value -= model.phi[i - 1] * dev[t - i];
    for (std::size_t j = 1; j <= q && j <= t; ++j) value -= model.theta[j - 1] * e[t - j];
    e[t] = value;
  }
  for (std::size_t s = 0; s < static_cast<std::size_t>(h); ++s) {
    const std::size_t t = n + s;
    double value = 0.0;
    for (std::size_t i = 1; i <= p && i <= t; ++i) value += model.phi[i - 1] * dev[t - i];
    for (std::size_t j = 1; j <= q && j <= t; ++j) {
      if (t - j < n) value += model.theta[j - 1] * e[t - j];  // future innovations are 0
    }
    dev[t] = value;
  }
  return std::max(0.0, model.mean + dev[n + static_cast<std::size_t>(h) - 1]);
}

double forecast_farima(const FarimaModel& model, std::span<const double> history, int h,
                       std::size_t ar_truncation) {
  const std::size_t n = history.size();
  const std::size_t limit = std::min(n, ar_truncation);
  // AR(infinity) weights a(B) = phi(B) (1-B)^d / theta(B), a_0 = 1.
  const std::vector<double> pi = fracdiff_weights(model.d, limit + 1);
  std::vector<double> c(limit + 1, 0.0);
  for (std::size_t k = 0; k <= limit; ++k) {
    double acc = pi[k];
    for (std::size_t i = 1; i <= model.phi.size() && i <= k; ++i) {
      acc -= model.phi[i - 1] * pi[k - i];
    }
    c[k] = acc;
  }
  std::vector<double> a(limit + 1, 0.0);
  for (std::size_t k = 0; k <= limit; ++k) {
    double acc = c[k];
    for (std::size_t j = 1; j <= model.theta.size() && j <= k; ++j) {
      acc -= model.theta[j - 1] * a[k - j];
    }
    a[k] = acc;
  }

  std::vector<double> dev(n + static_cast<std::size_t>(h));
  for (std::size_t t = 0; t < n; ++t) dev[t] = history[t] - model.mean;
  for (std::size_t s = 0; s < static_cast<std::size_t>(h); ++s) {
    const std::size_t t = n + s;
    double value = 0.0;
    for (std::size_t k = 1; k <= limit && k <= t; ++k) {
      value -= a[k] * dev[t - k];
    }
    dev[t] = value;
  }
  return std::max(0.0, model.mean + dev[n + static_cast<std::size_t>(h) - 1]);
}

SelectedModel select_best(std::span<const double> series, ModelFamily family,
                          const SelectOptions& options, Exec exec, WarmStarts* warm) {
  struct Candidate {
    int p, q;
    ArmaModel arma;
    FarimaModel farima;
    bool fitted = false;
    bool converged = false;
    double aic = 0.0;
    std::vector<double> raw;
  };
  std::vector<Candidate> candidates;
  for (int p = 0; p <= options.max_p; ++p) {
    for (int q = 0; q <= options.max_q; ++q) {
      candidates.push_back({p, q, {}, {}, false, false, 0.0, {}});
    }
  }

  for_each_index(candidates.size(), exec, [&](std::size_t i) {
    Candidate& c = candidates[i];
    FitOptions fit = options.fit;
    if (warm) {
      auto it = warm->find({c.p, c.q});
      if (it != warm->end()) fit.warm_start = it->second;
    }
    try {
      if (family == ModelFamily::arma) {
        c.arma = fit_arma(series, c.p, c.q, fit);
        c.converged = c.arma.converged;
        c.aic = c.arma.aic;
      } else {
        c.farima = fit_farima(series, c.p, c.q, fit);
        c.converged = c.farima.converged;
        c.aic = c.farima.aic;
      }
      c.fitted = true;
    } catch (const DataError&) {
      c.fitted = false;  // candidate skipped (series too short for the orders)
    }
  });

  // Persist warm starts from this round (unconstrained parameters).
  if (warm) {
    for (const Candidate& c : candidates) {
      if (!c.fitted || !c.converged) continue;
      std::vector<double> raw;
      if (family == ModelFamily::arma) {
        std::vector<double> pacf;
        if (!coefficients_to_pacf(c.arma.phi, pacf)) continue;
        for (double r : pacf) raw.push_back(safe_atanh(r));
        if (!coefficients_to_pacf(c.arma.theta, pacf)) continue;
        for (double r : pacf) raw.push_back(safe_atanh(r));
      } else {
        raw.push_back(safe_atanh(c.farima.d / kDBound));
        std::vector<double> pacf;
        if (!coefficients_to_pacf(c.farima.phi, pacf)) continue;
        for (double r : pacf) raw.push_back(safe_atanh(r));
        if (!coefficients_to_pacf(c.farima.theta, pacf)) continue;
        for (double r : pacf) raw.push_back(safe_atanh(r));
      }
      (*warm)[{c.p, c.q}] = std::move(raw);
    }
  }

  double min_aic = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) {
    if (c.fitted && c.converged) min_aic = std::min(min_aic, c.aic);
  }
  if (!std::isfinite(min_aic)) {
    throw_data_error(ErrorCode::all_diverged, "no candidate model converged");
  }
  // Among everything within the tie window of the minimum, prefer parsimony.
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (!c.fitted || !c.converged) continue;
    if (c.aic > min_aic + options.aic_tie_tolerance) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    const auto key = std::make_tuple(c.p + c.q, c.p, c.aic);
    const auto best_key = std::make_tuple(best->p + best->q, best->p, best->aic);
    if (key < best_key) best = &c;
  }

  SelectedModel chosen;
  chosen.family = family;
  if (family == ModelFamily::arma) {
    chosen.arma = best->arma;
  } else {
    chosen.farima = best->farima;
  }
  return chosen;
}

}  // namespace attackproc
