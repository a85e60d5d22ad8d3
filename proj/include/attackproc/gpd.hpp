#ifndef ATTACKPROC_GPD_HPP
#define ATTACKPROC_GPD_HPP

#include <cstdint>
#include <span>

namespace attackproc {

struct GpdFit {
  double threshold = 0.0;       // empirical quantile used as u
  std::size_t n_exceed = 0;
  double xi = 0.0;              // shape
  double beta = 0.0;            // scale, > 0
  double se_xi = 0.0;           // from the observed information matrix
  bool converged = false;
};

struct GpdOptions {
  double threshold_quantile = 0.90;
  std::size_t min_exceedances = 50;
  int restarts = 5;
  int max_evals = 800;
  std::uint64_t seed = 0x6a11ULL;
};

// Peaks-over-threshold fit: maximizes the generalized Pareto log-likelihood
// over the exceedances above the empirical quantile. The xi = 0 branch is the
// exponential limit. Throws TooFewExceedances; non-convergence is reported in
// the result.
GpdFit fit_gpd(std::span<const double> values, const GpdOptions& options = {});

// Negative log-likelihood of the exceedances (y >= 0) under GPD(xi, beta).
double gpd_negloglik(std::span<const double> exceedances, double xi, double beta);

enum class TailRegime { not_heavy, finite_variance, infinite_variance, infinite_mean };
const char* tail_regime_name(TailRegime r);

struct TailClassification {
  bool heavy = false;
  TailRegime regime = TailRegime::not_heavy;
};

// heavy requires a converged fit with xi significantly above zero
// (one-sided gate xi - z se > 0); the regime bands are
// (0, 0.5] finite variance, (0.5, 1) infinite variance, >= 1 infinite mean.
TailClassification classify_tail(const GpdFit& fit, double z = 1.645);

}  // namespace attackproc

#endif
