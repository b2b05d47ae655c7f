#include "dectlink/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>

#include "dectlink/campaign.hpp"
#include "dectlink/capture_io.hpp"
#include "dectlink/config.hpp"
#include "dectlink/errors.hpp"
#include "dectlink/fitting.hpp"
#include "dectlink/fixtures.hpp"
#include "dectlink/link_budget.hpp"
#include "dectlink/report.hpp"

namespace dectlink::cli {
namespace {

using config::RunConfig;
using propagation::ModelKind;

// Short aliases accepted next to the canonical --field-name flags.
const std::map<std::string_view, std::string_view> kAliases = {
    {"frequency_hz", "--f"},     {"tx_power_dbm", "--p-tx"}, {"h_tx_m", "--ht"},
    {"h_rx_m", "--hr"},          {"antenna_gain", "--gain"}, {"models", "--model"},
    {"output", "-o,--out"},      {"fixtures_dir", "--fixtures"},
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + cfg.output + "'");
  file << text;
}

std::string opt2(const std::optional<double>& v, int digits) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

std::string pl_column(ModelKind kind) {
  std::string s = "pl_" + std::string(propagation::model_name(kind)) + "_db";
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

// --- model eval -----------------------------------------------------------

int model_eval(const RunConfig& cfg, double distance_m, std::ostream& out) {
  const Distance d = Distance::meters(distance_m);
  std::string text;
  for (ModelKind kind : cfg.models) {
    const auto model = cfg.model(kind);
    const auto pl = model.evaluate(d);
    const auto names = pl.flags.names();
    text += fmt::format("{}: {:.2f} dB at {:.2f} m, {:.3f} MHz; flags: {}\n", propagation::model_name(kind),
                        pl.loss.value, d.in_meters(), model.frequency().in_megahertz(),
                        names.empty() ? "none" : fmt::format("{}", fmt::join(names, ",")));
    if (kind == ModelKind::kOkumuraHata || kind == ModelKind::kCost231Hata) {
      const auto ch = propagation::hata_height_correction(model.frequency(), model.geometry()->h_rx_m(), cfg.hata.city);
      text += fmt::format("  height correction: {:.2f} dB ({} city formula)", ch.value,
                          cfg.hata.city == propagation::CitySize::kLarge ? "large" : "small-medium");
      if (kind == ModelKind::kCost231Hata) {
        text += fmt::format(", metropolitan correction: {:.0f} dB", cfg.hata.metropolitan_correction().value);
      }
      text += '\n';
    }
    if (kind == ModelKind::kTwoRay) {
      text += fmt::format("  crossover distance: {:.2f} m\n",
                          propagation::two_ray_crossover(model.frequency(), *model.geometry()).in_meters());
    }
  }
  out << text;
  return kExitOk;
}

// --- model sweep ----------------------------------------------------------

int model_sweep(const RunConfig& cfg, double from_m, double to_m, std::size_t points, const std::string& spacing,
                std::ostream& out) {
  propagation::Spacing sp;
  if (spacing == "log") {
    sp = propagation::Spacing::kLog;
  } else if (spacing == "linear") {
    sp = propagation::Spacing::kLinear;
  } else {
    throw DomainError("spacing must be 'log' or 'linear'");
  }
  const auto distances = propagation::sweep_distances(Distance::meters(from_m), Distance::meters(to_m), points, sp);

  std::vector<std::vector<double>> columns;
  std::string text = "distance_m";
  for (ModelKind kind : cfg.models) {
    std::vector<double> pl(distances.size());
    cfg.model(kind).loss_batch(distances, pl);
    columns.push_back(std::move(pl));
    text += "," + pl_column(kind);
  }
  text += '\n';
  for (std::size_t i = 0; i < distances.size(); ++i) {
    text += fmt::format("{:.2f}", distances[i]);
    for (const auto& col : columns) text += fmt::format(",{:.2f}", col[i]);
    text += '\n';
  }
  emit(cfg, text, out);
  return kExitOk;
}

// --- analyze --------------------------------------------------------------

std::string analyze_csv(const std::vector<campaign::CampaignRecord>& records, const RunConfig& cfg, int digits) {
  std::string text =
      "location_id,environment,distance_m,tx_power_dbm,request_count,received_pcc,received_pdc,"
      "mean_rssi_pcc_dbm,std_rssi_pcc_db,min_rssi_pcc_dbm,max_rssi_pcc_dbm,"
      "mean_rssi_pdc_dbm,std_rssi_pdc_db,min_rssi_pdc_dbm,max_rssi_pdc_dbm,"
      "mean_snr_db,std_snr_db,sr_pcc_pct,sr_pdc_pct,empirical_pl_pcc_db,empirical_pl_pdc_db,reliable\n";
  auto stats = [&](const std::optional<campaign::PowerStats>& s) {
    if (!s) return std::string(",,,");
    return fmt::format("{:.{}f},{:.{}f},{:.{}f},{:.{}f}", s->mean.value, digits, s->std_dev.value, digits,
                       s->min.value, digits, s->max.value, digits);
  };
  for (const auto& r : records) {
    const bool reliable =
        link_budget::classify_reliability(r.sr_pcc_pct, cfg.thresholds) == link_budget::Reliability::kReliable &&
        link_budget::classify_reliability(r.sr_pdc_pct, cfg.thresholds) == link_budget::Reliability::kReliable;
    text += fmt::format(
        "{},{},{:.{}f},{:.{}f},{},{},{},{},{},{},{},{:.{}f},{:.{}f},{},{},{}\n", r.location_id,
        campaign::to_string(r.environment), r.distance.in_meters(), digits, r.tx_power.value, digits,
        r.request_count, r.rssi_pcc ? r.rssi_pcc->count : 0, r.rssi_pdc ? r.rssi_pdc->count : 0, stats(r.rssi_pcc),
        stats(r.rssi_pdc), opt2(r.snr ? std::optional<double>(r.snr->mean.value) : std::nullopt, digits),
        opt2(r.snr ? std::optional<double>(r.snr->std_dev.value) : std::nullopt, digits), r.sr_pcc_pct, digits,
        r.sr_pdc_pct, digits,
        opt2(r.empirical_pl_pcc ? std::optional<double>(r.empirical_pl_pcc->value) : std::nullopt, digits),
        opt2(r.empirical_pl_pdc ? std::optional<double>(r.empirical_pl_pdc->value) : std::nullopt, digits),
        reliable ? 1 : 0);
  }
  return text;
}

std::string analyze_table(const std::vector<campaign::CampaignRecord>& records, const RunConfig& cfg) {
  auto d2 = [](const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string("-"); };
  std::string text = fmt::format("{:<18} {:<12} {:>10} {:>6} {:>9} {:>6} {:>9} {:>7} {:>7} {:>7} {:>8} {:>8}\n",
                                 "location", "environment", "distance_m", "n", "rssi_pcc", "std", "rssi_pdc", "snr",
                                 "sr_pcc", "sr_pdc", "pl_pcc", "pl_pdc");
  for (const auto& r : records) {
    text += fmt::format(
        "{:<18} {:<12} {:>10.2f} {:>6} {:>9} {:>6} {:>9} {:>7} {:>7.2f} {:>7.2f} {:>8} {:>8}\n", r.location_id,
        campaign::to_string(r.environment), r.distance.in_meters(), r.request_count,
        d2(r.rssi_pcc ? std::optional<double>(r.rssi_pcc->mean.value) : std::nullopt),
        d2(r.rssi_pcc ? std::optional<double>(r.rssi_pcc->std_dev.value) : std::nullopt),
        d2(r.rssi_pdc ? std::optional<double>(r.rssi_pdc->mean.value) : std::nullopt),
        d2(r.snr ? std::optional<double>(r.snr->mean.value) : std::nullopt), r.sr_pcc_pct, r.sr_pdc_pct,
        d2(r.empirical_pl_pcc ? std::optional<double>(r.empirical_pl_pcc->value) : std::nullopt),
        d2(r.empirical_pl_pdc ? std::optional<double>(r.empirical_pl_pdc->value) : std::nullopt));
    for (const auto& w : r.warnings) text += fmt::format("  warning ({} @ {:.2f} m): {}\n", r.location_id, r.distance.in_meters(), w);
  }

  text += fmt::format("\nmax reliable distance (SR > {:.2f}% on PCC and PDC):\n", cfg.thresholds.min_success_rate_pct);
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].location_id == records[begin].location_id) ++end;
    const std::span<const campaign::CampaignRecord> series(records.data() + begin, end - begin);
    try {
      const Distance d = campaign::max_reliable_distance(series, cfg.thresholds);
      text += fmt::format("  {}: {:.2f} m\n", records[begin].location_id, d.in_meters());
    } catch (const NoReliablePoint&) {
      text += fmt::format("  {}: no reliable point\n", records[begin].location_id);
    }
    begin = end;
  }
  return text;
}

int analyze(const RunConfig& cfg, const std::vector<std::string>& files, int digits, std::ostream& out) {
  if (digits < 0 || digits > 17) throw DomainError("--digits must lie in [0, 17]");
  std::vector<std::future<campaign::CampaignRecord>> jobs;
  jobs.reserve(files.size());
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [&cfg, f] {
      return campaign::summarize(capture_io::read_capture(f), cfg.budget);
    }));
  }
  std::vector<campaign::CampaignRecord> records;
  records.reserve(files.size());
  for (auto& j : jobs) records.push_back(j.get());
  campaign::sort_records(records);

  out << analyze_table(records, cfg);
  if (!cfg.output.empty()) emit(cfg, analyze_csv(records, cfg, digits), out);
  return kExitOk;
}

// --- fit ------------------------------------------------------------------

int fit(const RunConfig& cfg, const std::string& input, const std::string& column, double d0_m,
        const std::string& method, std::ostream& out) {
  const auto rows = fixtures::parse_csv(read_text_file(input));
  if (rows.empty()) throw ParseError("missing header", 1, input);
  const auto& header = rows.front();
  const auto find = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(fmt::format("missing column '{}'", name), 1, input);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t dcol = find("distance_m");
  const std::size_t vcol = find(column);

  std::vector<fitting::FitPoint> points;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) throw ParseError("wrong number of fields", 0, input);
    const std::string& v = rows[r][vcol];
    if (v.empty() || v == "-") continue;
    double d = 0.0;
    double pl = 0.0;
    if (!parse_double(rows[r][dcol], d) || !parse_double(v, pl)) {
      throw ParseError(fmt::format("data row {}: bad number", r), 0, input);
    }
    points.push_back({Distance::meters(d), pl});
  }

  fitting::LogDistanceModel model;
  fitting::FitSummary summary;
  if (method == "closed-form") {
    auto f = fitting::fit_log_distance(points, d0_m);
    model = f.model;
    summary = std::move(f.summary);
  } else if (method == "nls") {
    if (points.empty()) throw DomainError("fit needs at least 2 points");
    const double start[] = {points.front().loss_db, 2.0};
    auto f = fitting::fit_general(fitting::log_distance_curve(d0_m), start, points);
    model = {f.parameters[0], f.parameters[1], d0_m};
    summary = std::move(f.summary);
  } else {
    throw DomainError("--method must be 'nls' or 'closed-form'");
  }

  std::string text;
  text += fmt::format("model: PL(d) = pl0 + 10*n*log10(d/d0)\n");
  text += fmt::format("method: {}\npoints: {}\nd0_m: {:.2f}\npl0_db: {:.2f}\nexponent: {:.4f}\nrmse_db: {:.2f}\n",
                      method, points.size(), model.d0_m, model.pl0_db, model.exponent, summary.rmse_db);
  text += fmt::format("iterations: {}\nconverged: {}\n", summary.iterations, summary.converged ? "yes" : "no");
  emit(cfg, text, out);
  return kExitOk;
}

// --- plan -----------------------------------------------------------------

int plan(const RunConfig& cfg, std::ostream& out) {
  using link_budget::Criterion;
  const auto env = cfg.environment;
  const Dbm noise = link_budget::noise_floor(cfg.budget);

  std::string text =
      "model,environment,tx_power_dbm,rssi_floor_dbm,snr_floor_db,noise_floor_dbm,max_distance_rssi_m,"
      "max_distance_snr_m,max_distance_m,binding,status,flags\n";
  for (ModelKind kind : cfg.models) {
    const auto model = cfg.model(kind);
    std::optional<double> by_rssi;
    std::optional<double> by_snr;
    try {
      by_rssi = link_budget::max_link_distance(cfg.budget, model, cfg.thresholds, env, Criterion::kRssi).in_meters();
    } catch (const ThresholdUnreachable&) {
    }
    try {
      by_snr = link_budget::max_link_distance(cfg.budget, model, cfg.thresholds, env, Criterion::kSnr).in_meters();
    } catch (const ThresholdUnreachable&) {
    }

    std::string binding;
    std::string status = "ok";
    std::optional<double> d_max;
    if (!by_rssi || !by_snr) {
      status = "threshold-unreachable";
      binding = !by_rssi && !by_snr ? "rssi+snr" : (!by_rssi ? "rssi" : "snr");
    } else {
      binding = *by_rssi <= *by_snr ? "rssi" : "snr";
      d_max = std::min(*by_rssi, *by_snr);
    }
    std::string flags = "none";
    if (d_max) {
      const auto names = model.validity(Distance::meters(*d_max)).names();
      if (!names.empty()) flags = fmt::format("{}", fmt::join(names, ";"));
    }
    text += fmt::format("{},{},{:.2f},{:.2f},{:.2f},{:.2f},{},{},{},{},{},{}\n", propagation::model_name(kind),
                        env == link_budget::Environment::kIndoor ? "indoor" : "outdoor", cfg.budget.tx_power.value,
                        cfg.thresholds.rssi_floor(env).value, cfg.thresholds.snr_floor(env).value, noise.value,
                        opt2(by_rssi, 2), opt2(by_snr, 2), opt2(d_max, 2), binding, status, flags);
  }
  emit(cfg, text, out);
  return kExitOk;
}

// --- report ---------------------------------------------------------------

int report_cmd(const RunConfig& cfg, double tolerance, std::ostream& out) {
  const std::filesystem::path dir = cfg.fixtures_dir;
  std::string integrity = "fixture integrity:";
  bool all_ok = true;
  for (const auto& c : fixtures::verify_checksums(dir)) {
    all_ok = all_ok && c.ok();
    integrity += fmt::format(" {}={}", c.file, c.ok() ? "ok" : "MISMATCH");
  }
  const auto set = fixtures::load_fixtures(dir);

  report::ReportOptions options;
  options.frequency = cfg.frequency();
  if (auto g = cfg.geometry()) options.geometry = *g;
  options.hata = cfg.hata;
  options.tolerance_db = tolerance;
  const auto rows = report::compare_outdoor_path_loss(set.outdoor_path_loss, options);

  out << integrity << '\n' << report::format_report_table(rows, options);
  if (!cfg.output.empty()) emit(cfg, report::format_report_csv(rows, options), out);
  if (!all_ok) throw ParseError("fixture checksum mismatch in " + dir.string());
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DECT-2020 NR link budget, path-loss models and measurement analysis"};
  app.name(args.empty() ? "dectlink" : args.front());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (default: $DECTLINK_CONFIG)");
  std::map<std::string, std::string> flag_text;
  std::vector<std::pair<std::string, CLI::Option*>> flag_options;
  for (const auto& f : config::fields()) {
    std::string names = config::flag_name(f.key);
    if (const auto a = kAliases.find(f.key); a != kAliases.end()) names += "," + std::string(a->second);
    std::string help(f.help);
    if (!f.default_text.empty()) help += fmt::format(" [default: {}]", f.default_text);
    flag_options.emplace_back(std::string(f.key), app.add_option(names, flag_text[std::string(f.key)], help));
  }

  auto* model_cmd = app.add_subcommand("model", "evaluate path-loss models");
  model_cmd->require_subcommand(1);
  model_cmd->fallthrough();

  double eval_d = 0.0;
  auto* eval_cmd = model_cmd->add_subcommand("eval", "evaluate the selected models at one distance");
  eval_cmd->add_option("--d,--distance-m", eval_d, "distance (m)")->required();

  double sweep_from = 1.0;
  double sweep_to = 1000.0;
  std::size_t sweep_points = 50;
  std::string sweep_spacing = "log";
  auto* sweep_cmd = model_cmd->add_subcommand("sweep", "tabulate PL versus distance as CSV");
  sweep_cmd->add_option("--from", sweep_from, "first distance (m)")->capture_default_str();
  sweep_cmd->add_option("--to", sweep_to, "last distance (m)")->capture_default_str();
  sweep_cmd->add_option("--points", sweep_points, "number of distances")->capture_default_str();
  sweep_cmd->add_option("--spacing", sweep_spacing, "log or linear")->capture_default_str();

  std::vector<std::string> analyze_files;
  int analyze_digits = 2;
  auto* analyze_cmd = app.add_subcommand("analyze", "summarise capture logs per location");
  analyze_cmd->add_option("captures", analyze_files, "capture CSV files (sidecar <stem>.meta next to each)")
      ->required();
  analyze_cmd->add_option("--digits", analyze_digits, "decimals in the CSV output")->capture_default_str();

  std::string fit_input;
  std::string fit_column = "pl_db";
  double fit_d0 = 1.0;
  std::string fit_method = "nls";
  auto* fit_cmd = app.add_subcommand("fit", "fit a log-distance model to (distance, PL) points");
  fit_cmd->add_option("--in", fit_input, "CSV with a distance_m column")->required();
  fit_cmd->add_option("--column", fit_column, "PL column to fit")->capture_default_str();
  fit_cmd->add_option("--d0", fit_d0, "reference distance (m)")->capture_default_str();
  fit_cmd->add_option("--method", fit_method, "nls or closed-form")->capture_default_str();

  auto* plan_cmd = app.add_subcommand("plan", "maximum link distance per model under RSSI and SNR floors");

  double report_tolerance = 0.25;
  auto* report_cmd_opt = app.add_subcommand("report", "compare reference outdoor path loss with computed models");
  report_cmd_opt->add_option("--tolerance", report_tolerance, "flag threshold (dB)")->capture_default_str();

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("dectlink");
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv(std::string(config::kConfigEnvVar).c_str())) config_path = env;
    }
    const KeyValues file_values = config_path.empty() ? KeyValues{} : read_key_values(config_path);
    KeyValues flag_values;
    for (const auto& [key, opt] : flag_options) {
      if (opt->count() > 0) flag_values[key] = flag_text[key];
    }
    const RunConfig cfg = config::resolve(file_values, flag_values);

    if (eval_cmd->parsed()) return model_eval(cfg, eval_d, out);
    if (sweep_cmd->parsed()) return model_sweep(cfg, sweep_from, sweep_to, sweep_points, sweep_spacing, out);
    if (analyze_cmd->parsed()) return analyze(cfg, analyze_files, analyze_digits, out);
    if (fit_cmd->parsed()) return fit(cfg, fit_input, fit_column, fit_d0, fit_method, out);
    if (plan_cmd->parsed()) return plan(cfg, out);
    if (report_cmd_opt->parsed()) return report_cmd(cfg, report_tolerance, out);
    err << "error: no command given\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace dectlink::cli
