#include "attackproc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "attackproc/errors.hpp"

namespace attackproc {

namespace {

// Non-finite doubles have no JSON representation; follow the convention of
// printing them as strings.
Json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  return v;
}

}  // namespace

void write_rate_series_csv(std::ostream& out, const RateSeries& series) {
  out << "bucket_index,timestamp,count\n";
  char ts[64];
  for (std::size_t k = 0; k < series.counts.size(); ++k) {
    std::snprintf(ts, sizeof(ts), "%.6f", series.origin + static_cast<double>(k) * series.bucket);
    out << k << ',' << ts << ',' << series.counts[k] << '\n';
  }
}

Json rate_series_json(const RateSeries& series) {
  Json j;
  j["resolution"] = resolution_id(series.resolution);
  j["bucket_seconds"] = series.bucket;
  j["origin"] = series.origin;
  j["counts"] = series.counts;
  return j;
}

RateSeries rate_series_from_json(const Json& j) {
  RateSeries series;
  series.resolution = parse_resolution(j.at("resolution").get<std::string>());
  series.bucket = j.at("bucket_seconds").get<double>();
  series.origin = j.at("origin").get<double>();
  series.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  return series;
}

std::vector<double> read_value_column(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int column = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      // Header detection: a line that does not start with a number.
      char* end = nullptr;
      std::strtod(line.c_str(), &end);
      if (end == line.c_str()) {
        std::stringstream header(line);
        std::string name;
        int index = 0;
        while (std::getline(header, name, ',')) {
          if (name == "count" || name == "gap_seconds" || name == "value") {
            column = index;
          }
          ++index;
        }
        if (column < 0) {
          throw_data_error(ErrorCode::bad_value,
                           "CSV header has no count/gap_seconds/value column");
        }
        continue;
      }
    }
    std::stringstream fields(line);
    std::string field;
    int index = 0;
    const int want = column < 0 ? 0 : column;
    while (std::getline(fields, field, ',')) {
      if (index == want) {
        try {
          values.push_back(std::stod(field));
        } catch (const std::exception&) {
          throw_data_error(ErrorCode::bad_value, "non-numeric value '" + field + "'");
        }
        break;
      }
      ++index;
    }
  }
  if (values.empty()) {
    throw_data_error(ErrorCode::empty_input, "no values in input");
  }
  return values;
}

void write_gaps_csv(std::ostream& out, std::span<const double> gaps) {
  out << "gap_seconds\n";
  char buf[64];
  for (double g : gaps) {
    std::snprintf(buf, sizeof(buf), "%.9g", g);
    out << buf << '\n';
  }
}

void write_qq_csv(std::ostream& out, const QqData& qq) {
  out << "theoretical,empirical\n";
  char buf[128];
  for (std::size_t i = 0; i < qq.theoretical.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g", qq.theoretical[i], qq.empirical[i]);
    out << buf << '\n';
  }
}

void write_forecast_steps_csv(std::ostream& out, const ForecastRun& run) {
  out << "t,p,q,d,Y,X,e\n";
  char buf[160];
  for (const ForecastStep& s : run.steps) {
    std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.9g,%.9g,%.9g,%.9g", s.t, s.p, s.q, s.d,
                  s.predicted, s.observed, s.error);
    out << buf << '\n';
  }
}

void write_hurst_points_csv(std::ostream& out, const HurstReport& report) {
  out << "method,log_x,log_y\n";
  char buf[128];
  for (const MethodOutcome& m : report.methods) {
    if (!m.estimate) continue;
    for (const auto& [x, y] : m.estimate->regression_points) {
      std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g", hurst_method_name(m.estimate->method), x, y);
      out << buf << '\n';
    }
  }
}

Json summary_json(const SummaryStats& s) {
  Json j;
  j["n"] = s.n;
  j["min"] = s.min;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["variance"] = s.variance;
  j["max"] = s.max;
  if (s.variance_flagged) j["variance_flagged"] = true;
  return j;
}

Json acf_json(const AcfCurve& curve) {
  Json j;
  j["rho"] = curve.rho;
  return j;
}

Json dispersion_json(const DispersionHint& hint) {
  Json j;
  j["variance_mean_ratio"] = hint.ratio;
  j["overdispersed"] = hint.flag;
  return j;
}

Json hurst_json(const HurstReport& report) {
  Json j;
  Json methods = Json::object();
  for (const MethodOutcome& m : report.methods) {
    if (m.estimate) {
      Json e;
      e["h"] = m.estimate->h_value;
      e["slope"] = m.estimate->slope;
      e["intercept"] = m.estimate->intercept;
      e["points"] = m.estimate->regression_points.size();
      methods[hurst_method_name(m.estimate->method)] = e;
    }
  }
  // Preserve failed methods as explicit error entries, in method order.
  static constexpr HurstMethod kOrder[] = {HurstMethod::rs,  HurstMethod::agv,
                                           HurstMethod::peng, HurstMethod::per,
                                           HurstMethod::box, HurstMethod::wave};
  for (std::size_t i = 0; i < kHurstMethodCount; ++i) {
    if (!report.methods[i].estimate) {
      methods[hurst_method_name(kOrder[i])] = Json{{"error", report.methods[i].error}};
    }
  }
  j["methods"] = methods;
  j["h_bar"] = report.h_bar;
  j["methods_used"] = report.methods_used;
  if (report.few_methods) j["few_methods"] = true;
  j["lrd_candidate"] = report.lrd_candidate;
  j["spurious"] = report.spurious;
  if (report.screen) {
    Json s;
    s["changepoint_detected"] = report.screen->changepoint_detected;
    s["changepoint_location"] = report.screen->changepoint_location;
    s["trend_detected"] = report.screen->trend_detected;
    s["h_after_adjustment"] = report.screen->h_after_adjustment;
    j["screen"] = s;
  }
  j["verdict"] = lrd_verdict_name(report.verdict);
  return j;
}

Json gof_json(const GofReport& report) {
  Json j;
  j["lambda_hat"] = report.fit.lambda_hat;
  j["n"] = report.fit.n;
  j["ks"] = json_number(report.ks);
  j["cm"] = json_number(report.cm);
  j["ad"] = json_number(report.ad);
  j["critical"] = Json{{"ks", report.critical.ks}, {"cm", report.critical.cm},
                       {"ad", report.critical.ad}};
  j["reject"] = Json{{"ks", report.reject_ks}, {"cm", report.reject_cm},
                     {"ad", report.reject_ad}};
  return j;
}

Json tail_json(const GpdFit& fit, const TailClassification& c) {
  Json j;
  j["threshold"] = fit.threshold;
  j["n_exceed"] = fit.n_exceed;
  j["xi"] = fit.xi;
  j["beta"] = fit.beta;
  j["se_xi"] = json_number(fit.se_xi);
  j["converged"] = fit.converged;
  j["heavy"] = c.heavy;
  j["regime"] = tail_regime_name(c.regime);
  return j;
}

Json forecast_json(const ForecastRun& run) {
  Json j;
  j["family"] = model_family_name(run.family);
  j["horizon"] = run.horizon;
  j["start_fraction"] = run.start_fraction;
  j["steps"] = run.steps.size();
  j["skipped"] = run.skipped.size();
  j["pmad"] = run.metrics.pmad;
  j["pmad_prime"] = run.metrics.pmad_prime;
  j["oa"] = run.metrics.oa;
  j["ua"] = run.metrics.ua;
  return j;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw_data_error(ErrorCode::io_failure, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw_data_error(ErrorCode::io_failure, "cannot write " + path);
  }
  out << content;
}

}  // namespace attackproc
