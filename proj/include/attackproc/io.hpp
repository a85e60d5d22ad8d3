#ifndef ATTACKPROC_IO_HPP
#define ATTACKPROC_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "attackproc/gof.hpp"
#include "attackproc/gpd.hpp"
#include "attackproc/hurst.hpp"
#include "attackproc/rate_series.hpp"
#include "attackproc/rolling.hpp"
#include "attackproc/stats.hpp"

namespace attackproc {

using Json = nlohmann::ordered_json;

// CSV column layout `bucket_index,timestamp,count`.
void write_rate_series_csv(std::ostream& out, const RateSeries& series);

// JSON document embedding the resolution metadata next to the counts.
Json rate_series_json(const RateSeries& series);
RateSeries rate_series_from_json(const Json& j);

// Reads a numeric column: either a bare one-value-per-line file or a CSV
// whose header names the column (`count` and `gap_seconds` are recognized).
std::vector<double> read_value_column(std::istream& in);

void write_gaps_csv(std::ostream& out, std::span<const double> gaps);
void write_qq_csv(std::ostream& out, const QqData& qq);
void write_forecast_steps_csv(std::ostream& out, const ForecastRun& run);
void write_hurst_points_csv(std::ostream& out, const HurstReport& report);

Json summary_json(const SummaryStats& s);
Json acf_json(const AcfCurve& curve);
Json dispersion_json(const DispersionHint& hint);
Json hurst_json(const HurstReport& report);
Json gof_json(const GofReport& report);
Json tail_json(const GpdFit& fit, const TailClassification& c);
Json forecast_json(const ForecastRun& run);

// 64-bit FNV-1a, used for the config hash in reports.
std::uint64_t fnv1a(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace attackproc

#endif
