#include "attackproc/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace attackproc {

namespace {
// FFTW's planner mutates global state; execution of a finished plan does not.
std::mutex planner_mutex;
}  // namespace

std::vector<std::complex<double>> fft_forward(std::span<const std::complex<double>> x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> power_spectrum(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  std::vector<double> power(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    power[k] = std::norm(out[k]);
  }
  return power;
}

}  // namespace attackproc
