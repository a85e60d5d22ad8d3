#include "attackproc/report.hpp"

#include <algorithm>
#include <chrono>

#include "attackproc/errors.hpp"
#include "attackproc/rolling.hpp"

namespace attackproc {

namespace {

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      throw_data_error(ErrorCode::bad_config, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

AnalysisConfig config_from_json(const Json& j) {
  AnalysisConfig config;
  reject_unknown_keys(j,
                      {"assembly", "bucket_seconds", "levels", "acf_lags",
                       "dispersion_threshold", "lrd", "gof", "tails", "forecast", "seed",
                       "jobs", "emit_timing"},
                      "config");

  if (j.contains("assembly")) {
    const Json& a = j.at("assembly");
    reject_unknown_keys(a,
                        {"flow_timeout", "flow_lifetime", "production_ports",
                         "production_services", "honeypot_ranges"},
                        "assembly");
    read_if(a, "flow_timeout", config.assembly.flow_timeout);
    read_if(a, "flow_lifetime", config.assembly.flow_lifetime);
    if (a.contains("production_ports")) {
      for (const auto& p : a.at("production_ports")) {
        const auto port = p.get<std::int64_t>();
        if (port < 0 || port > 65535) {
          throw_data_error(ErrorCode::bad_config, "production port out of range");
        }
        config.assembly.production_ports.insert(static_cast<std::uint16_t>(port));
      }
    }
    if (a.contains("production_services")) {
      for (const auto& s : a.at("production_services")) {
        config.assembly.production_ports.insert(service_port(s.get<std::string>()));
      }
    }
    if (a.contains("honeypot_ranges")) {
      for (const auto& r : a.at("honeypot_ranges")) {
        config.assembly.honeypot_ranges.push_back(parse_ip_range(r.get<std::string>()));
      }
    }
    if (!(config.assembly.flow_timeout > 0) ||
        config.assembly.flow_timeout > config.assembly.flow_lifetime) {
      throw_data_error(ErrorCode::bad_config, "need 0 < flow_timeout <= flow_lifetime");
    }
  }

  read_if(j, "bucket_seconds", config.bucket_seconds);
  if (!(config.bucket_seconds > 0)) {
    throw_data_error(ErrorCode::bad_config, "bucket_seconds must be positive");
  }
  if (j.contains("levels")) {
    const Json& l = j.at("levels");
    reject_unknown_keys(l, {"victim", "port", "attacker"}, "levels");
    read_if(l, "victim", config.victim_level);
    read_if(l, "port", config.port_level);
    read_if(l, "attacker", config.attacker_level);
  }
  read_if(j, "acf_lags", config.acf_lags);
  read_if(j, "dispersion_threshold", config.dispersion_threshold);

  if (j.contains("lrd")) {
    const Json& l = j.at("lrd");
    reject_unknown_keys(l,
                        {"band_low", "band_high", "grid_points", "min_block",
                         "lowfreq_fraction", "min_lowfreq_points", "box_count",
                         "min_wave_coeffs", "penalty_factor", "trend_r2_threshold"},
                        "lrd");
    read_if(l, "band_low", config.lrd.band_low);
    read_if(l, "band_high", config.lrd.band_high);
    read_if(l, "grid_points", config.lrd.grid_points);
    read_if(l, "min_block", config.lrd.min_block);
    read_if(l, "lowfreq_fraction", config.lrd.lowfreq_fraction);
    read_if(l, "min_lowfreq_points", config.lrd.min_lowfreq_points);
    read_if(l, "box_count", config.lrd.box_count);
    read_if(l, "min_wave_coeffs", config.lrd.min_wave_coeffs);
    read_if(l, "penalty_factor", config.lrd.penalty_factor);
    read_if(l, "trend_r2_threshold", config.lrd.trend_r2_threshold);
  }

  if (j.contains("gof")) {
    const Json& g = j.at("gof");
    reject_unknown_keys(g, {"ks_cv", "cm_cv", "ad_cv"}, "gof");
    read_if(g, "ks_cv", config.gof.ks);
    read_if(g, "cm_cv", config.gof.cm);
    read_if(g, "ad_cv", config.gof.ad);
  }

  if (j.contains("tails")) {
    const Json& t = j.at("tails");
    reject_unknown_keys(t, {"quantile", "min_exceedances", "confidence_z"}, "tails");
    read_if(t, "quantile", config.tails.threshold_quantile);
    read_if(t, "min_exceedances", config.tails.min_exceedances);
    read_if(t, "confidence_z", config.tail_confidence_z);
    if (!(config.tails.threshold_quantile > 0 && config.tails.threshold_quantile < 1)) {
      throw_data_error(ErrorCode::bad_config, "tails.quantile must be in (0,1)");
    }
  }

  if (j.contains("forecast")) {
    const Json& f = j.at("forecast");
    reject_unknown_keys(f,
                        {"enabled", "family", "horizon", "start_fraction", "last_window",
                         "max_p", "max_q", "max_evals", "restarts"},
                        "forecast");
    read_if(f, "enabled", config.forecast.enabled);
    read_if(f, "family", config.forecast.family);
    read_if(f, "horizon", config.forecast.horizon);
    read_if(f, "start_fraction", config.forecast.start_fraction);
    if (f.contains("last_window") && !f.at("last_window").is_null()) {
      config.forecast.last_window = f.at("last_window").get<std::size_t>();
    }
    read_if(f, "max_p", config.forecast.max_p);
    read_if(f, "max_q", config.forecast.max_q);
    read_if(f, "max_evals", config.forecast.max_evals);
    read_if(f, "restarts", config.forecast.restarts);
    if (config.forecast.family != "auto" && config.forecast.family != "arma" &&
        config.forecast.family != "farima") {
      throw_data_error(ErrorCode::bad_config, "forecast.family must be auto, arma or farima");
    }
  }

  read_if(j, "seed", config.seed);
  read_if(j, "jobs", config.jobs);
  read_if(j, "emit_timing", config.emit_timing);
  return config;
}

Json config_to_json(const AnalysisConfig& c) {
  Json j;
  Json assembly;
  assembly["flow_timeout"] = c.assembly.flow_timeout;
  assembly["flow_lifetime"] = c.assembly.flow_lifetime;
  assembly["production_ports"] = c.assembly.production_ports;
  Json ranges = Json::array();
  for (const IpRange& r : c.assembly.honeypot_ranges) {
    ranges.push_back(format_ipv4(r.first) + "-" + format_ipv4(r.last));
  }
  assembly["honeypot_ranges"] = ranges;
  j["assembly"] = assembly;
  j["bucket_seconds"] = c.bucket_seconds;
  j["levels"] = Json{{"victim", c.victim_level}, {"port", c.port_level},
                     {"attacker", c.attacker_level}};
  j["acf_lags"] = c.acf_lags;
  j["dispersion_threshold"] = c.dispersion_threshold;
  j["lrd"] = Json{{"band_low", c.lrd.band_low},
                  {"band_high", c.lrd.band_high},
                  {"grid_points", c.lrd.grid_points},
                  {"min_block", c.lrd.min_block},
                  {"lowfreq_fraction", c.lrd.lowfreq_fraction},
                  {"min_lowfreq_points", c.lrd.min_lowfreq_points},
                  {"box_count", c.lrd.box_count},
                  {"min_wave_coeffs", c.lrd.min_wave_coeffs},
                  {"penalty_factor", c.lrd.penalty_factor},
                  {"trend_r2_threshold", c.lrd.trend_r2_threshold}};
  j["gof"] = Json{{"ks_cv", c.gof.ks}, {"cm_cv", c.gof.cm}, {"ad_cv", c.gof.ad}};
  j["tails"] = Json{{"quantile", c.tails.threshold_quantile},
                    {"min_exceedances", c.tails.min_exceedances},
                    {"confidence_z", c.tail_confidence_z}};
  Json forecast;
  forecast["enabled"] = c.forecast.enabled;
  forecast["family"] = c.forecast.family;
  forecast["horizon"] = c.forecast.horizon;
  forecast["start_fraction"] = c.forecast.start_fraction;
  forecast["last_window"] =
      c.forecast.last_window ? Json(*c.forecast.last_window) : Json(nullptr);
  forecast["max_p"] = c.forecast.max_p;
  forecast["max_q"] = c.forecast.max_q;
  forecast["max_evals"] = c.forecast.max_evals;
  forecast["restarts"] = c.forecast.restarts;
  j["forecast"] = forecast;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["emit_timing"] = c.emit_timing;
  return j;
}

std::uint64_t config_hash(const AnalysisConfig& config) {
  Json j = config_to_json(config);
  j.erase("jobs");
  j.erase("emit_timing");
  return fnv1a(j.dump());
}

namespace {

struct SeriesTask {
  Resolution resolution;
};

Json analyze_series(std::span<const FlowRecord> flows, const Resolution& resolution,
                    const TimeWindow& window, const AnalysisConfig& config) {
  Json entry;
  entry["resolution"] = resolution_id(resolution);

  RateSeries series;
  try {
    series = build_rate_series(flows, resolution, config.bucket_seconds, window);
  } catch (const DataError& e) {
    entry["error"] = e.what();
    return entry;
  }
  entry["buckets"] = series.counts.size();
  const std::vector<double> values = series.as_doubles();

  try {
    entry["summary"] = summary_json(summarize(values));
  } catch (const DataError& e) {
    entry["summary"] = Json{{"error", e.what()}};
  }
  if (config.acf_lags > 0) {
    try {
      entry["acf"] = acf_json(acf(values, config.acf_lags));
    } catch (const DataError& e) {
      entry["acf"] = Json{{"error", e.what()}};
    }
  }
  try {
    entry["dispersion"] = dispersion_json(dispersion_hint(series, config.dispersion_threshold));
  } catch (const DataError& e) {
    entry["dispersion"] = Json{{"error", e.what()}};
  }

  LrdVerdict verdict = LrdVerdict::not_lrd;
  try {
    // The per-series pool already runs tasks in parallel; keep the six
    // estimators sequential inside it.
    HurstReport hurst = hurst_all(values, config.lrd, Exec::serial);
    verdict = hurst.verdict;
    entry["hurst"] = hurst_json(hurst);
  } catch (const DataError& e) {
    entry["hurst"] = Json{{"error", e.what()}};
  }

  try {
    InterArrivalSample gaps = inter_arrivals(flows, resolution);
    entry["poisson"] = gof_json(poisson_test(gaps.gaps, config.gof));
  } catch (const DataError& e) {
    entry["poisson"] = Json{{"error", e.what()}};
  }

  try {
    GpdFit fit = fit_gpd(values, config.tails);
    entry["tail"] = tail_json(fit, classify_tail(fit, config.tail_confidence_z));
  } catch (const DataError& e) {
    entry["tail"] = Json{{"error", e.what()}};
  }

  if (config.forecast.enabled) {
    try {
      RollingOptions rolling;
      rolling.family = config.forecast.family == "arma"    ? ModelFamily::arma
                       : config.forecast.family == "farima" ? ModelFamily::farima
                       : verdict == LrdVerdict::lrd         ? ModelFamily::farima
                                                            : ModelFamily::arma;
      rolling.horizon = config.forecast.horizon;
      rolling.start_fraction = config.forecast.start_fraction;
      rolling.metrics_window = config.forecast.last_window;
      rolling.select.max_p = config.forecast.max_p;
      rolling.select.max_q = config.forecast.max_q;
      rolling.select.fit.max_evals = config.forecast.max_evals;
      rolling.select.fit.restarts = config.forecast.restarts;
      rolling.select.fit.seed = config.seed;
      rolling.exec = Exec::serial;  // parallelism lives at the series level
      entry["forecast"] = forecast_json(rolling_evaluate(values, rolling));
    } catch (const DataError& e) {
      entry["forecast"] = Json{{"error", e.what()}};
    }
  }
  return entry;
}

}  // namespace

Json build_report(std::span<const FlowRecord> flows, const AnalysisConfig& config, Exec exec) {
  const auto started = std::chrono::steady_clock::now();
  if (flows.empty()) {
    throw_data_error(ErrorCode::empty_selection, "no flows to analyze");
  }

  // One shared window, so victim/port series superpose exactly onto the
  // network series.
  RateSeries network = build_rate_series(flows, Resolution::network(), config.bucket_seconds);
  TimeWindow window{network.origin, network.counts.size()};

  std::vector<SeriesTask> tasks;
  tasks.push_back({Resolution::network()});
  for (std::uint32_t ip : victim_ips(flows)) {
    if (config.victim_level) tasks.push_back({Resolution::victim(ip)});
    if (config.port_level) {
      for (std::uint16_t port : victim_ports(flows, ip)) {
        tasks.push_back({Resolution::port(ip, port)});
      }
    }
    if (config.attacker_level) tasks.push_back({Resolution::attacker(ip)});
  }

  std::vector<Json> entries(tasks.size());
  for_each_index(tasks.size(), exec, [&](std::size_t i) {
    entries[i] = analyze_series(flows, tasks[i].resolution, window, config);
  });

  std::sort(entries.begin(), entries.end(), [](const Json& a, const Json& b) {
    return a.at("resolution").get<std::string>() < b.at("resolution").get<std::string>();
  });

  Json report;
  report["schema_version"] = kReportSchemaVersion;
  report["tool_version"] = kToolVersion;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  report["config_hash"] = hash;
  report["flows"] = flows.size();
  if (config.emit_timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    report["timing_seconds"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
  }
  report["series"] = entries;
  return report;
}

}  // namespace attackproc
