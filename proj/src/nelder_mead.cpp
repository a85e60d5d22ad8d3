#include "attackproc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace attackproc {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  NelderMeadResult result;
  if (dim == 0) {
    result.x = {};
    result.fx = f(x0);
    result.evals = 1;
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < dim; ++i) {
    double step = options.init_step;
    if (simplex[i + 1][i] != 0.0) step *= std::max(1.0, std::abs(simplex[i + 1][i]));
    simplex[i + 1][i] += step;
  }

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    double v = f(x);
    return std::isfinite(v) ? v : 1e300;
  };

  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  bool converged = false;
  while (evals < options.max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    const double spread = std::abs(values[worst] - values[best]);
    if (spread <= options.f_tol * (std::abs(values[best]) + options.f_tol)) {
      converged = true;
      break;
    }

    // Centroid of all vertices except the worst.
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double coeff) {
      std::vector<double> x(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        x[j] = centroid[j] + coeff * (centroid[j] - simplex[worst][j]);
      }
      return x;
    };

    std::vector<double> reflected = blend(1.0);
    double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      std::vector<double> expanded = blend(2.0);
      double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = std::move(expanded);
        values[worst] = f_expanded;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      simplex[worst] = std::move(reflected);
      values[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < values[worst];
      std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
      double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contracted;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < dim; ++j) {
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          }
          values[i] = eval(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (values[i] < values[best]) best = i;
  }
  result.x = simplex[best];
  result.fx = values[best];
  result.evals = evals;
  result.converged = converged;
  return result;
}

}  // namespace attackproc
