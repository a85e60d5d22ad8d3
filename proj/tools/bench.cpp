// Compares the serial reference kernels against their OpenMP versions.
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "attackproc/exec.hpp"
#include "attackproc/hurst.hpp"
#include "attackproc/model.hpp"
#include "attackproc/rolling.hpp"
#include "attackproc/simulate.hpp"

namespace ap = attackproc;

namespace {

double seconds_of(const std::function<void()>& body, int repeats) {
  body();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) body();
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count() /
         static_cast<double>(repeats);
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", ap::hardware_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    ap::GeneratorSpec spec;
    spec.kind = ap::GenKind::fgn;
    spec.hurst = 0.8;
    spec.n = 1 << 15;
    spec.seed = 7;
    const std::vector<double> series = ap::generate(spec);
    const double serial = seconds_of(
        [&] { ap::hurst_all(series, {}, ap::Exec::serial); }, 3);
    const double parallel = seconds_of(
        [&] { ap::hurst_all(series, {}, ap::Exec::parallel); }, 3);
    row("hurst_all n=32768", serial, parallel);
  }

  {
    ap::GeneratorSpec spec;
    spec.kind = ap::GenKind::ar1;
    spec.phi = 0.5;
    spec.n = 1500;
    spec.seed = 11;
    const std::vector<double> series = ap::generate(spec);
    const double serial = seconds_of(
        [&] { ap::select_best(series, ap::ModelFamily::arma, {}, ap::Exec::serial); }, 3);
    const double parallel = seconds_of(
        [&] { ap::select_best(series, ap::ModelFamily::arma, {}, ap::Exec::parallel); }, 3);
    row("select_best ARMA n=1500", serial, parallel);
  }

  {
    ap::GeneratorSpec spec;
    spec.kind = ap::GenKind::farima0;
    spec.d = 0.3;
    spec.n = 700;
    spec.seed = 13;
    const std::vector<double> series = ap::generate(spec);
    const double serial = seconds_of(
        [&] { ap::select_best(series, ap::ModelFamily::farima, {}, ap::Exec::serial); }, 3);
    const double parallel = seconds_of(
        [&] { ap::select_best(series, ap::ModelFamily::farima, {}, ap::Exec::parallel); }, 3);
    row("select_best FARIMA n=700", serial, parallel);
  }

  {
    ap::GeneratorSpec spec;
    spec.kind = ap::GenKind::ar1;
    spec.phi = 0.4;
    spec.n = 240;
    spec.seed = 17;
    const std::vector<double> series = ap::generate(spec);
    ap::RollingOptions options;
    options.family = ap::ModelFamily::arma;
    options.select.max_p = 2;
    options.select.max_q = 2;
    options.exec = ap::Exec::serial;
    const double serial = seconds_of([&] { ap::rolling_evaluate(series, options); }, 1);
    options.exec = ap::Exec::parallel;
    const double parallel = seconds_of([&] { ap::rolling_evaluate(series, options); }, 1);
    row("rolling ARMA n=240", serial, parallel);
  }

  return 0;
}
