#ifndef ATTACKPROC_NELDER_MEAD_HPP
#define ATTACKPROC_NELDER_MEAD_HPP

#include <functional>
#include <span>
#include <vector>

namespace attackproc {

struct NelderMeadOptions {
  int max_evals = 500;
  double f_tol = 1e-9;     // relative spread of simplex values
  double init_step = 0.2;  // initial simplex edge per coordinate
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Derivative-free simplex minimizer (reflection 1, expansion 2, outside/inside
// contraction 0.5, shrink 0.5). Fully deterministic given the start point.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace attackproc

#endif
