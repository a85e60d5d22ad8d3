#ifndef ATTACKPROC_REPORT_HPP
#define ATTACKPROC_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "attackproc/gof.hpp"
#include "attackproc/gpd.hpp"
#include "attackproc/hurst.hpp"
#include "attackproc/io.hpp"
#include "attackproc/model.hpp"

namespace attackproc {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct ForecastConfig {
  bool enabled = true;
  std::string family = "auto";  // auto (by LRD verdict), arma, farima
  int horizon = 1;
  double start_fraction = 0.5;
  std::optional<std::size_t> last_window;
  int max_p = 4;
  int max_q = 4;
  int max_evals = 500;
  int restarts = 3;
};

struct AnalysisConfig {
  AssemblyConfig assembly;
  double bucket_seconds = 3600.0;
  bool victim_level = true;
  bool port_level = true;
  bool attacker_level = true;
  std::size_t acf_lags = 24;
  double dispersion_threshold = 1.5;
  HurstOptions lrd;
  CriticalValues gof;
  GpdOptions tails;
  double tail_confidence_z = 1.645;
  ForecastConfig forecast;
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = all hardware threads
  bool emit_timing = false;
};

// Strict parse: unknown keys anywhere are rejected.
AnalysisConfig config_from_json(const Json& j);
Json config_to_json(const AnalysisConfig& config);

// Hash over the semantically meaningful fields; jobs and emit_timing do not
// participate since they cannot change any analysis result.
std::uint64_t config_hash(const AnalysisConfig& config);

// Full five-step pipeline over one flow set: rate series per requested
// resolution, then summary/ACF/dispersion, LRD identification, the Poisson
// test on inter-arrivals, the tail fit, and the rolling forecast. Every
// requested analysis either appears or carries an explicit error entry.
// Series are processed in a worker pool under Exec::parallel; entries are
// ordered by resolution id either way.
Json build_report(std::span<const FlowRecord> flows, const AnalysisConfig& config,
                  Exec exec = Exec::parallel);

}  // namespace attackproc

#endif
