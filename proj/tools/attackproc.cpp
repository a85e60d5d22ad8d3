#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "attackproc/errors.hpp"
#include "attackproc/io.hpp"
#include "attackproc/pcap.hpp"
#include "attackproc/report.hpp"
#include "attackproc/rolling.hpp"
#include "attackproc/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ap = attackproc;

namespace {

// All writers go through here so --out and stdout behave identically.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    ap::write_text_file(out_path, content);
  }
}

std::string dump_json(const ap::Json& j) { return j.dump(2) + "\n"; }

std::vector<ap::FlowRecord> load_flows(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ap::throw_data_error(ap::ErrorCode::io_failure, "cannot open " + path);
  }
  ap::FlowLogResult log = ap::parse_flow_log(in);
  if (log.bad_lines > 0) {
    std::cerr << "warning: skipped " << log.bad_lines << " invalid flow-log lines\n";
  }
  if (log.flows.empty()) {
    ap::throw_data_error(ap::ErrorCode::empty_selection, "flow log " + path + " has no flows");
  }
  return log.flows;
}

std::vector<double> load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ap::throw_data_error(ap::ErrorCode::io_failure, "cannot open " + path);
  }
  return ap::read_value_column(in);
}

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string format;  // json, csv or ndjson where a choice exists
};

ap::AnalysisConfig load_config(const GlobalArgs& args) {
  ap::AnalysisConfig config;
  if (!args.config_path.empty()) {
    ap::Json j = ap::Json::parse(ap::read_text_file(args.config_path), nullptr, false);
    if (j.is_discarded()) {
      ap::throw_data_error(ap::ErrorCode::bad_config,
                           "config " + args.config_path + " is not valid JSON");
    }
    config = ap::config_from_json(j);
  }
  if (args.seed) config.seed = *args.seed;
  if (args.jobs > 0) config.jobs = args.jobs;
#ifdef _OPENMP
  if (config.jobs > 0) omp_set_num_threads(config.jobs);
#endif
  return config;
}

std::vector<std::uint16_t> parse_port_list(const std::string& text) {
  std::vector<std::uint16_t> ports;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const int port = std::stoi(item);
    if (port < 0 || port > 65535) {
      ap::throw_data_error(ap::ErrorCode::bad_value, "port out of range: " + item);
    }
    ports.push_back(static_cast<std::uint16_t>(port));
  }
  return ports;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attack-process statistics: flow assembly, LRD identification, "
               "Poisson and heavy-tail tests, gray-box rate prediction"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--config", global.config_path, "JSON config file")
      ->envname("ATTACKPROC_CONFIG");
  std::uint64_t seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "seed override for all randomness");
  app.add_option("--jobs", global.jobs, "worker threads (0 = all cores)");
  app.add_option("--format", global.format, "output format where a choice exists")
      ->check(CLI::IsMember({"json", "csv", "ndjson"}));

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "emit synthetic series or flows");
  ap::GeneratorSpec spec;
  std::string kind_name = "fgn", base_name = "white";
  spec.n = 512;
  simulate->add_option("--kind", kind_name, "white|fgn|farima0|ar1|poisson|gpd|levelshift|trend");
  simulate->add_option("--n", spec.n, "series length / arrival count");
  simulate->add_option("--hurst", spec.hurst, "fgn Hurst parameter");
  simulate->add_option("--d", spec.d, "farima0 fractional order");
  simulate->add_option("--phi", spec.phi, "ar1 coefficient");
  simulate->add_option("--lambda", spec.lambda, "poisson arrival rate (per second)");
  simulate->add_option("--xi", spec.xi, "gpd shape");
  simulate->add_option("--beta", spec.beta, "gpd scale");
  simulate->add_option("--base-kind", base_name, "base process for levelshift/trend");
  simulate->add_option("--shift", spec.shift_sigmas, "level shift in base-sd units");
  simulate->add_option("--location", spec.location_fraction, "shift location fraction");
  simulate->add_option("--slope", spec.slope, "trend slope in base-sd units");
  bool as_flows = false;
  simulate->add_flag("--flows", as_flows, "emit NDJSON flows instead of a CSV series");
  ap::FlowSynthOptions synth;
  simulate->add_option("--bucket", synth.bucket, "flow-synthesis bucket seconds");
  simulate->add_option("--rate-mean", synth.rate_mean, "mean arrivals per bucket");
  simulate->add_option("--rate-sd", synth.rate_sd, "arrival-rate sd per bucket");
  simulate->add_option("--victims", synth.victims, "victim address count");
  std::string sim_out;
  simulate->add_option("-o,--out", sim_out, "output path (default stdout)");

  // ---- flows ----
  auto* flows_cmd = app.add_subcommand("flows", "parse captures and assemble flows");
  std::string pcap_path, flowlog_path, flows_out;
  flows_cmd->add_option("--pcap", pcap_path, "classic pcap input");
  flows_cmd->add_option("--flowlog", flowlog_path, "NDJSON flow-log input");
  flows_cmd->add_option("-o,--out", flows_out, "output path (default stdout)");
  double timeout_flag = -1, lifetime_flag = -1;
  flows_cmd->add_option("--timeout", timeout_flag, "flow inactivity timeout seconds");
  flows_cmd->add_option("--lifetime", lifetime_flag, "flow maximum lifetime seconds");
  std::string ports_flag, services_flag;
  flows_cmd->add_option("--production-ports", ports_flag, "comma-separated victim ports to keep");
  flows_cmd->add_option("--production-services", services_flag,
                        "comma-separated service names (smb,netbios,http,mysql,ssh)");
  std::vector<std::string> range_flags;
  flows_cmd->add_option("--honeypot-range", range_flags,
                        "honeypot/victim IP range (repeatable; CIDR, single or a-b)");

  // ---- rates ----
  auto* rates_cmd = app.add_subcommand("rates", "build a rate series from flows");
  std::string rates_flows, rates_resolution = "network", rates_out;
  double rates_bucket = 0;
  rates_cmd->add_option("--flows", rates_flows, "NDJSON flow log")->required();
  rates_cmd->add_option("--resolution", rates_resolution,
                        "network | victim/IP | port/IP:PORT | attacker/IP");
  rates_cmd->add_option("--bucket", rates_bucket, "bucket seconds (default from config)");
  rates_cmd->add_option("-o,--out", rates_out, "output path (default stdout)");

  // ---- hurst ----
  auto* hurst_cmd = app.add_subcommand("hurst", "six Hurst estimators + LRD verdict");
  std::string hurst_series, hurst_out, hurst_points;
  hurst_cmd->add_option("--series", hurst_series, "CSV series input")->required();
  hurst_cmd->add_option("-o,--out", hurst_out, "report path (default stdout)");
  hurst_cmd->add_option("--points-csv", hurst_points, "regression points CSV path");

  // ---- poisson ----
  auto* poisson_cmd = app.add_subcommand("poisson", "exponential fit + KS/CM/AD tests");
  std::string poisson_gaps, poisson_flows, poisson_resolution = "network";
  std::string poisson_out, poisson_qq;
  poisson_cmd->add_option("--gaps", poisson_gaps, "CSV of inter-arrival gaps");
  poisson_cmd->add_option("--flows", poisson_flows, "NDJSON flow log");
  poisson_cmd->add_option("--resolution", poisson_resolution, "resolution for --flows");
  poisson_cmd->add_option("-o,--out", poisson_out, "report path (default stdout)");
  poisson_cmd->add_option("--qq", poisson_qq, "QQ-plot data CSV path");

  // ---- tails ----
  auto* tails_cmd = app.add_subcommand("tails", "POT/GPD tail fit and classification");
  std::string tails_series, tails_out;
  double tails_quantile = 0;
  tails_cmd->add_option("--series", tails_series, "CSV series input")->required();
  tails_cmd->add_option("--quantile", tails_quantile, "threshold quantile override");
  tails_cmd->add_option("-o,--out", tails_out, "report path (default stdout)");

  // ---- predict ----
  auto* predict_cmd = app.add_subcommand("predict", "rolling gray-box forecast evaluation");
  std::string predict_series, predict_family = "farima", predict_out, predict_steps;
  int predict_h = 1;
  double predict_p = 0.5;
  std::size_t predict_window = 0;
  predict_cmd->add_option("--series", predict_series, "CSV series input")->required();
  predict_cmd->add_option("--family", predict_family, "arma | farima")
      ->check(CLI::IsMember({"arma", "farima"}));
  predict_cmd->add_option("--horizon", predict_h, "steps ahead");
  predict_cmd->add_option("--start-fraction", predict_p, "prediction start point p");
  predict_cmd->add_option("--last-window", predict_window,
                          "restrict metrics to the last K observations");
  predict_cmd->add_option("-o,--out", predict_out, "report path (default stdout)");
  predict_cmd->add_option("--steps-csv", predict_steps, "per-step CSV path");

  // ---- report ----
  auto* report_cmd = app.add_subcommand("report", "full five-step pipeline report");
  std::string report_pcap, report_flowlog, report_flows, report_out;
  report_cmd->add_option("--pcap", report_pcap, "classic pcap input");
  report_cmd->add_option("--flowlog", report_flowlog, "NDJSON flow log to assemble from");
  report_cmd->add_option("--flows", report_flows, "NDJSON flows (already assembled)");
  report_cmd->add_option("-o,--out", report_out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (seed_opt->count() > 0) global.seed = seed_flag;
    ap::AnalysisConfig config = load_config(global);

    if (simulate->parsed()) {
      spec.kind = ap::parse_gen_kind(kind_name);
      spec.base_kind = ap::parse_gen_kind(base_name);
      if (global.seed) spec.seed = *global.seed;
      if (as_flows || global.format == "ndjson") {
        std::vector<ap::FlowRecord> flows = ap::synthesize_flows(spec, synth);
        std::ostringstream buffer;
        ap::write_flow_log(buffer, flows);
        emit(sim_out, buffer.str());
      } else {
        std::vector<double> values = ap::generate(spec);
        std::ostringstream buffer;
        buffer << "value\n";
        char line[64];
        for (double v : values) {
          std::snprintf(line, sizeof(line), "%.17g\n", v);
          buffer << line;
        }
        emit(sim_out, buffer.str());
      }
      return 0;
    }

    if (flows_cmd->parsed()) {
      if (pcap_path.empty() == flowlog_path.empty()) {
        std::cerr << "error: need exactly one of --pcap or --flowlog\n";
        return 1;
      }
      if (timeout_flag > 0) config.assembly.flow_timeout = timeout_flag;
      if (lifetime_flag > 0) config.assembly.flow_lifetime = lifetime_flag;
      for (std::uint16_t p : parse_port_list(ports_flag)) {
        config.assembly.production_ports.insert(p);
      }
      if (!services_flag.empty()) {
        std::stringstream ss(services_flag);
        std::string name;
        while (std::getline(ss, name, ',')) {
          if (!name.empty()) config.assembly.production_ports.insert(ap::service_port(name));
        }
      }
      for (const std::string& r : range_flags) {
        config.assembly.honeypot_ranges.push_back(ap::parse_ip_range(r));
      }

      std::vector<ap::FlowRecord> flows;
      if (!pcap_path.empty()) {
        ap::PcapResult pcap = ap::parse_pcap_file(pcap_path);
        if (pcap.truncated_packets > 0) {
          std::cerr << "warning: " << pcap.truncated_packets << " truncated trailing packet(s)\n";
        }
        ap::AssemblyResult assembled = ap::assemble_flows(pcap.packets, config.assembly);
        if (assembled.packets_unoriented > 0) {
          std::cerr << "warning: " << assembled.packets_unoriented
                    << " packet(s) without attacker/victim orientation\n";
        }
        flows = std::move(assembled.flows);
      } else {
        flows = load_flows(flowlog_path);
      }
      std::ostringstream buffer;
      ap::write_flow_log(buffer, flows);
      emit(flows_out, buffer.str());
      return 0;
    }

    if (rates_cmd->parsed()) {
      std::vector<ap::FlowRecord> flows = load_flows(rates_flows);
      const double bucket = rates_bucket > 0 ? rates_bucket : config.bucket_seconds;
      ap::RateSeries series =
          ap::build_rate_series(flows, ap::parse_resolution(rates_resolution), bucket);
      if (global.format == "json") {
        emit(rates_out, dump_json(ap::rate_series_json(series)));
      } else {
        std::ostringstream buffer;
        ap::write_rate_series_csv(buffer, series);
        emit(rates_out, buffer.str());
      }
      return 0;
    }

    if (hurst_cmd->parsed()) {
      std::vector<double> values = load_series(hurst_series);
      ap::HurstReport report = ap::hurst_all(values, config.lrd);
      emit(hurst_out, dump_json(ap::hurst_json(report)));
      if (!hurst_points.empty()) {
        std::ostringstream buffer;
        ap::write_hurst_points_csv(buffer, report);
        ap::write_text_file(hurst_points, buffer.str());
      }
      return 0;
    }

    if (poisson_cmd->parsed()) {
      std::vector<double> gaps;
      if (!poisson_gaps.empty()) {
        gaps = load_series(poisson_gaps);
      } else if (!poisson_flows.empty()) {
        std::vector<ap::FlowRecord> flows = load_flows(poisson_flows);
        gaps = ap::inter_arrivals(flows, ap::parse_resolution(poisson_resolution)).gaps;
      } else {
        std::cerr << "error: need --gaps or --flows\n";
        return 1;
      }
      if (gaps.size() < 1000 && config.gof.ks == 0.01) {
        std::cerr << "warning: KS critical value 0.01 with n < 1000; the KS decision "
                     "is unreliable at this sample size\n";
      }
      ap::GofReport report = ap::poisson_test(gaps, config.gof);
      emit(poisson_out, dump_json(ap::gof_json(report)));
      if (!poisson_qq.empty()) {
        std::ostringstream buffer;
        ap::write_qq_csv(buffer, ap::qq_exponential(gaps, report.fit));
        ap::write_text_file(poisson_qq, buffer.str());
      }
      return 0;
    }

    if (tails_cmd->parsed()) {
      std::vector<double> values = load_series(tails_series);
      ap::GpdOptions options = config.tails;
      if (tails_quantile > 0) options.threshold_quantile = tails_quantile;
      ap::GpdFit fit = ap::fit_gpd(values, options);
      emit(tails_out,
           dump_json(ap::tail_json(fit, ap::classify_tail(fit, config.tail_confidence_z))));
      return 0;
    }

    if (predict_cmd->parsed()) {
      std::vector<double> values = load_series(predict_series);
      ap::RollingOptions options;
      options.family =
          predict_family == "arma" ? ap::ModelFamily::arma : ap::ModelFamily::farima;
      options.horizon = predict_h;
      options.start_fraction = predict_p;
      if (predict_window > 0) options.metrics_window = predict_window;
      options.select.max_p = config.forecast.max_p;
      options.select.max_q = config.forecast.max_q;
      options.select.fit.max_evals = config.forecast.max_evals;
      options.select.fit.restarts = config.forecast.restarts;
      options.select.fit.seed = config.seed;
      ap::ForecastRun run = ap::rolling_evaluate(values, options);
      emit(predict_out, dump_json(ap::forecast_json(run)));
      if (!predict_steps.empty()) {
        std::ostringstream buffer;
        ap::write_forecast_steps_csv(buffer, run);
        ap::write_text_file(predict_steps, buffer.str());
      }
      return 0;
    }

    if (report_cmd->parsed()) {
      std::vector<ap::FlowRecord> flows;
      if (!report_flows.empty()) {
        flows = load_flows(report_flows);
      } else if (!report_pcap.empty()) {
        ap::PcapResult pcap = ap::parse_pcap_file(report_pcap);
        flows = ap::assemble_flows(pcap.packets, config.assembly).flows;
      } else if (!report_flowlog.empty()) {
        flows = load_flows(report_flowlog);
      } else {
        std::cerr << "error: need one of --flows, --pcap or --flowlog\n";
        return 1;
      }
      emit(report_out, dump_json(ap::build_report(flows, config)));
      return 0;
    }
  } catch (const ap::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
