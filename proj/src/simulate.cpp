#include "attackproc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "attackproc/errors.hpp"
#include "attackproc/fft.hpp"
#include "attackproc/model.hpp"
#include "attackproc/rng.hpp"
#include "attackproc/stats.hpp"

namespace attackproc {

GenKind parse_gen_kind(const std::string& name) {
  if (name == "white") return GenKind::white_noise;
  if (name == "fgn") return GenKind::fgn;
  if (name == "farima0") return GenKind::farima0;
  if (name == "ar1") return GenKind::ar1;
  if (name == "poisson") return GenKind::poisson_process;
  if (name == "gpd") return GenKind::gpd_sample;
  if (name == "levelshift") return GenKind::level_shift;
  if (name == "trend") return GenKind::trend;
  throw_data_error(ErrorCode::bad_value, "unknown generator kind '" + name + "'");
}

const char* gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::white_noise: return "white";
    case GenKind::fgn: return "fgn";
    case GenKind::farima0: return "farima0";
    case GenKind::ar1: return "ar1";
    case GenKind::poisson_process: return "poisson";
    case GenKind::gpd_sample: return "gpd";
    case GenKind::level_shift: return "levelshift";
    case GenKind::trend: return "trend";
  }
  return "?";
}

double fgn_autocovariance(double hurst, std::size_t lag) {
  const double h2 = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

namespace {

std::vector<double> white_noise(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

// Circulant embedding (Davies-Harte) of the exact fGn autocovariance.
std::vector<double> fgn(std::size_t n, double hurst, Rng& rng) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw_data_error(ErrorCode::bad_value, "fgn needs H in (0,1)");
  }
  std::size_t m = 2;
  while (m < 2 * n) m <<= 1;

  for (int attempt = 0; attempt < 2; ++attempt, m <<= 1) {
    std::vector<std::complex<double>> circ(m);
    for (std::size_t k = 0; k <= m / 2; ++k) {
      circ[k] = fgn_autocovariance(hurst, k);
    }
    for (std::size_t k = 1; k < m / 2; ++k) {
      circ[m - k] = circ[k];
    }
    std::vector<std::complex<double>> eigen = fft_forward(circ);
    double min_eigen = 0.0, max_eigen = 0.0;
    for (const auto& e : eigen) {
      min_eigen = std::min(min_eigen, e.real());
      max_eigen = std::max(max_eigen, e.real());
    }
    if (min_eigen < -1e-9 * std::max(max_eigen, 1.0)) {
      continue;  // embedding not nonnegative definite at this length
    }

    const double md = static_cast<double>(m);
    std::vector<std::complex<double>> spectrum(m);
    const double lam0 = std::max(eigen[0].real(), 0.0);
    const double lam_half = std::max(eigen[m / 2].real(), 0.0);
    spectrum[0] = std::sqrt(lam0 / md) * rng.normal();
    spectrum[m / 2] = std::sqrt(lam_half / md) * rng.normal();
    for (std::size_t k = 1; k < m / 2; ++k) {
      const double lam = std::max(eigen[k].real(), 0.0);
      const double scale = std::sqrt(lam / (2.0 * md));
      const double a = rng.normal();
      const double b = rng.normal();
      spectrum[k] = std::complex<double>(scale * a, scale * b);
      spectrum[m - k] = std::conj(spectrum[k]);
    }
    std::vector<std::complex<double>> path = fft_forward(spectrum);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = path[t].real();
    return x;
  }
  throw_data_error(ErrorCode::embedding_failure,
                   "circulant spectrum stayed negative after doubling");
}

std::vector<double> farima0(std::size_t n, double d, Rng& rng) {
  if (!(d > -0.5 && d < 0.5)) {
    throw_data_error(ErrorCode::bad_value, "farima0 needs d in (-0.5, 0.5)");
  }
  // (1-B)^{-d} applied to white noise, with a burn-in prefix dropped so the
  // retained block is close to stationary.
  const std::size_t burn = n;
  std::vector<double> noise = white_noise(n + burn, rng);
  std::vector<double> full = fracdiff(noise, -d);
  return {full.begin() + static_cast<long>(burn), full.end()};
}

std::vector<double> ar1(std::size_t n, double phi, Rng& rng) {
  if (!(std::abs(phi) < 1.0)) {
    throw_data_error(ErrorCode::bad_value, "ar1 needs |phi| < 1");
  }
  std::vector<double> x(n);
  double prev = rng.normal() / std::sqrt(1.0 - phi * phi);  // stationary start
  for (std::size_t t = 0; t < n; ++t) {
    prev = phi * prev + rng.normal();
    x[t] = prev;
  }
  return x;
}

std::vector<double> poisson_arrivals(std::size_t n, double lambda, Rng& rng) {
  if (!(lambda > 0.0)) {
    throw_data_error(ErrorCode::bad_value, "poisson needs lambda > 0");
  }
  std::vector<double> arrivals(n);
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.exponential(lambda);
    arrivals[i] = t;
  }
  return arrivals;
}

std::vector<double> gpd_sample(std::size_t n, double xi, double beta, Rng& rng) {
  if (!(beta > 0.0)) {
    throw_data_error(ErrorCode::bad_value, "gpd needs beta > 0");
  }
  std::vector<double> x(n);
  for (double& v : x) {
    const double u = rng.uniform01();
    if (std::abs(xi) < 1e-9) {
      v = -beta * std::log(u);  // u is 1-U in distribution
    } else {
      v = beta * (std::pow(u, -xi) - 1.0) / xi;
    }
  }
  return x;
}

std::vector<double> base_series(const GeneratorSpec& spec, GenKind kind, Rng& rng) {
  switch (kind) {
    case GenKind::white_noise: return white_noise(spec.n, rng);
    case GenKind::fgn: return fgn(spec.n, spec.hurst, rng);
    case GenKind::farima0: return farima0(spec.n, spec.d, rng);
    case GenKind::ar1: return ar1(spec.n, spec.phi, rng);
    default:
      throw_data_error(ErrorCode::bad_value,
                       std::string("'") + gen_kind_name(kind) + "' cannot be a base kind");
  }
}

}  // namespace

std::vector<double> generate(const GeneratorSpec& spec) {
  if (spec.n == 0) {
    throw_data_error(ErrorCode::bad_value, "generator length must be positive");
  }
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GenKind::white_noise:
    case GenKind::fgn:
    case GenKind::farima0:
    case GenKind::ar1:
      return base_series(spec, spec.kind, rng);
    case GenKind::poisson_process:
      return poisson_arrivals(spec.n, spec.lambda, rng);
    case GenKind::gpd_sample:
      return gpd_sample(spec.n, spec.xi, spec.beta, rng);
    case GenKind::level_shift: {
      std::vector<double> x = base_series(spec, spec.base_kind, rng);
      const double sd = std::sqrt(population_variance(x));
      const auto at = static_cast<std::size_t>(spec.location_fraction *
                                               static_cast<double>(spec.n));
      for (std::size_t t = at; t < x.size(); ++t) x[t] += spec.shift_sigmas * sd;
      return x;
    }
    case GenKind::trend: {
      std::vector<double> x = base_series(spec, spec.base_kind, rng);
      const double sd = std::sqrt(population_variance(x));
      for (std::size_t t = 0; t < x.size(); ++t) {
        x[t] += spec.slope * sd * (static_cast<double>(t) / static_cast<double>(spec.n));
      }
      return x;
    }
  }
  throw_data_error(ErrorCode::bad_value, "unhandled generator kind");
}

std::vector<FlowRecord> synthesize_flows(const GeneratorSpec& spec,
                                         const FlowSynthOptions& options) {
  if (options.victims == 0 || options.ports.empty()) {
    throw_data_error(ErrorCode::bad_value, "need at least one victim and one port");
  }
  std::vector<double> arrivals;
  if (spec.kind == GenKind::poisson_process) {
    arrivals = generate(spec);
  } else {
    const std::vector<double> series = generate(spec);
    const double mean = sample_mean(series);
    const double sd = std::sqrt(std::max(population_variance(series), 1e-300));
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double z = (series[k] - mean) / sd;
      const auto count = static_cast<long long>(
          std::llround(options.rate_mean + options.rate_sd * z));
      if (count <= 0) continue;
      for (long long i = 0; i < count; ++i) {
        const double within = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        arrivals.push_back((static_cast<double>(k) + within) * options.bucket);
      }
    }
  }

  std::vector<FlowRecord> flows;
  flows.reserve(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    FlowRecord f;
    f.victim_ip = parse_ipv4("192.168.100.1") + static_cast<std::uint32_t>(i % options.victims);
    f.victim_port = options.ports[(i / options.victims) % options.ports.size()];
    f.attacker_ip = parse_ipv4("10.0.0.1") + static_cast<std::uint32_t>(i % 200000);
    f.attacker_port = static_cast<std::uint16_t>(40000 + i % 20000);
    f.protocol = Protocol::tcp;
    f.start = arrivals[i];
    f.end = arrivals[i] + 1.0;
    f.packet_count = 1 + i % 3;
    f.termination = Termination::fin;
    flows.push_back(f);
  }
  return flows;
}

}  // namespace attackproc
