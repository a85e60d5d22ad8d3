#ifndef ATTACKPROC_SIMULATE_HPP
#define ATTACKPROC_SIMULATE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attackproc/flow.hpp"

namespace attackproc {

enum class GenKind {
  white_noise,
  fgn,
  farima0,
  ar1,
  poisson_process,
  gpd_sample,
  level_shift,
  trend,
};

GenKind parse_gen_kind(const std::string& name);
const char* gen_kind_name(GenKind k);

// Ground-truth generator description. level_shift and trend wrap a base kind
// (white_noise, fgn, farima0 or ar1) re-using the same parameter fields.
struct GeneratorSpec {
  GenKind kind = GenKind::white_noise;
  std::size_t n = 0;
  std::uint64_t seed = 1;

  double hurst = 0.8;        // fgn
  double d = 0.3;            // farima0
  double phi = 0.5;          // ar1
  double lambda = 1.0;       // poisson_process
  double xi = 0.5;           // gpd_sample
  double beta = 1.0;         // gpd_sample

  GenKind base_kind = GenKind::white_noise;  // level_shift / trend
  double shift_sigmas = 5.0;                 // level_shift
  double location_fraction = 0.5;            // level_shift
  double slope = 5.0;                        // trend, in base-sd units over [0,1]
};

// Deterministic given the spec (seeded std::mt19937_64 with fixed
// transforms). For poisson_process the result holds arrival timestamps;
// everything else is a value series of length n.
std::vector<double> generate(const GeneratorSpec& spec);

// Exact fGn autocovariance at lag h for unit-variance increments.
double fgn_autocovariance(double hurst, std::size_t lag);

struct FlowSynthOptions {
  double bucket = 3600.0;
  double rate_mean = 60.0;
  double rate_sd = 20.0;
  std::size_t victims = 4;
  std::vector<std::uint16_t> ports = {445, 139, 80, 3306, 22};
};

// Turns a generator spec into synthetic attack flows so the whole pipeline
// can run without real captures. Count kinds drive per-bucket arrival counts
// (standardized, scaled, floored at zero); poisson_process uses its arrival
// times directly. Victims and ports are assigned round-robin.
std::vector<FlowRecord> synthesize_flows(const GeneratorSpec& spec,
                                         const FlowSynthOptions& options = {});

}  // namespace attackproc

#endif
