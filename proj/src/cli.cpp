#include "blx/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "blx/errors.hpp"
#include "blx/simd/kernels.hpp"

#ifndef BLX_VERSION
#define BLX_VERSION "0.0.0"
#endif

namespace blx {

using json = nlohmann::ordered_json;

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double parse_omega(std::string_view text) {
  const std::size_t pi_at = text.find("pi");
  if (pi_at == std::string_view::npos) return parse_number(text);
  double scale = 1.0;
  if (pi_at > 0) {
    std::string_view lead = text.substr(0, pi_at);
    if (!lead.ends_with('*')) throw std::invalid_argument("bad omega: " + std::string(text));
    lead.remove_suffix(1);
    scale = parse_number(lead);
  }
  std::string_view rest = text.substr(pi_at + 2);
  double value = scale * std::numbers::pi;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("bad omega: " + std::string(text));
    value /= parse_number(rest.substr(1));
  }
  if (!std::isfinite(value)) throw std::invalid_argument("bad omega: " + std::string(text));
  return value;
}

namespace {

BandParams band_from(const json& c) {
  BandParams b{c.at("omega").get<double>(), c.at("n_modes").get<int>(),
               c.at("ridge").get<double>()};
  b.validate();
  return b;
}

MovingAverageConfig ma_from(const json& c) {
  return {c.at("ma_width").get<int>(), parse_boundary_policy(c.at("ma_boundary").get<std::string>())};
}

ColumnRef column_ref(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) return j.get<std::size_t>();
  return j.get<std::string>();
}

json column_json(const std::string& text) {
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    return std::stoull(text);
  }
  return text;
}

ExperimentConfig experiment_from(const json& c) {
  ExperimentConfig e;
  e.window_len = c.at("window").get<int>();
  e.horizon = c.at("horizon").get<int>();
  e.repetitions = c.value("repetitions", 1);
  e.band = band_from(c);
  e.ma = ma_from(c);
  e.correction = LevelCorrection::parse(c.at("correction").get<std::string>());
  const int lookback = c.at("baseline").get<int>();
  if (lookback > 0) e.baseline = LinearBaselineConfig{lookback};
  e.overlap = parse_overlap(c.value("overlap", "none"));
  e.burn_in = c.value("burn_in", 0);
  e.validate();
  return e;
}

Series load_input(const json& c) {
  ColumnSpec spec;
  spec.column = column_ref(c.at("column"));
  spec.skip_header = c.at("skip_header").get<bool>();
  if (c.contains("date_column") && !c.at("date_column").is_null()) {
    spec.date_column = column_ref(c.at("date_column"));
  }
  return load_series_csv(c.at("input").get<std::string>(), spec);
}

RunReport run_simulate(const json& c) {
  const BandParams band = band_from(c);
  SimConfig sim;
  sim.sigma = c.at("sigma").get<double>();
  sim.coeff_low = c.at("coeff_low").get<double>();
  sim.coeff_high = c.at("coeff_high").get<double>();
  sim.z0 = c.at("z0").get<double>();
  sim.seed = c.at("seed").get<std::uint64_t>();
  const int horizon = c.at("horizon").get<int>();
  const int window_len = c.at("window").get<int>();
  if (window_len < 1) throw std::invalid_argument("window must be >= 1");
  sim.path_length = window_len + horizon;
  const Window window(-(window_len - 1), 0);

  RunReport r;
  const TrialAggregate agg =
      run_trials(c.at("trials").get<int>(), sim, band, window, horizon, ma_from(c));
  ResidualReport profile;
  profile.label = "extrapolation";
  profile.per_point = agg.per_point;
  profile.n_points = horizon;
  for (double v : agg.per_point) profile.total += v;
  profile.mean = profile.total / horizon;
  r.reports.push_back(std::move(profile));
  r.series.push_back({"extrapolation_profile", Series(1, agg.per_point)});
  r.simulation = agg;
  r.diagnostics["condition_estimate"] = WindowFitter(band, window).condition_estimate();
  r.diagnostics["unique_regime"] = window.in_unique_regime(band.n_modes);
  return r;
}

void add_fit_diagnostics(RunReport& r, const FittedExtrapolator& m) {
  r.diagnostics["condition_estimate"] = m.condition_estimate();
  r.diagnostics["unique_regime"] = m.window().in_unique_regime(m.params().n_modes);
  r.diagnostics["level_shift_history"] = m.level_shift_history();
  r.diagnostics["level_shift_forecast"] = m.level_shift_forecast();
}

RunReport run_forecast(const json& c) {
  const ExperimentConfig e = experiment_from(c);
  const Series data = load_input(c);
  const ForecastResult res = run_single_forecast(data, e);
  RunReport r;
  r.reports.push_back(res.report);
  r.reports.push_back(res.historical);
  if (res.linear_report) {
    r.reports.push_back(*res.linear_report);
    r.comparison = compare(res.report, *res.linear_report);
  }
  r.series.push_back({"raw", data.slice(data.start(), res.actual.last())});
  r.series.push_back({"mv", res.history_mv});
  r.series.push_back({"history_fit", res.history_fit});
  r.series.push_back({"forecast", res.forecast});
  r.series.push_back({"actual", res.actual});
  if (res.linear) r.series.push_back({"linear", *res.linear});
  add_fit_diagnostics(r, res.model);
  return r;
}

RunReport run_backtest(const json& c) {
  const ExperimentConfig e = experiment_from(c);
  const Series data = load_input(c);
  const RollingResult res = run_rolling_forecast(data, e);
  RunReport r;
  r.reports.push_back(res.report);
  if (res.linear_report) {
    r.reports.push_back(*res.linear_report);
    r.comparison = compare(res.report, *res.linear_report);
  }
  r.series.push_back({"forecast", res.forecast});
  r.series.push_back({"actual", res.actual});
  if (res.linear) r.series.push_back({"linear", *res.linear});
  r.diagnostics["emitted_days"] = res.forecast.size();
  r.diagnostics["fit_ends"] = res.fit_ends;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunReport run_compare(const json& c) {
  const RunReport a = parse_report(read_file(c.at("a").get<std::string>()));
  const RunReport b = parse_report(read_file(c.at("b").get<std::string>()));
  const std::string la = c.at("label_a").get<std::string>();
  const std::string lb = c.at("label_b").get<std::string>();
  const ResidualReport* ra = a.find_report(la);
  const ResidualReport* rb = b.find_report(lb);
  if (ra == nullptr) throw Error("no report labeled '" + la + "' in " + c.at("a").get<std::string>());
  if (rb == nullptr) throw Error("no report labeled '" + lb + "' in " + c.at("b").get<std::string>());
  RunReport r;
  r.reports = {*ra, *rb};
  r.comparison = compare(*ra, *rb);
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

RunReport execute(const json& config) {
  const std::string command = config.at("command").get<std::string>();
  const auto started = std::chrono::steady_clock::now();
  RunReport r;
  if (command == "simulate") {
    r = run_simulate(config);
  } else if (command == "forecast") {
    r = run_forecast(config);
  } else if (command == "backtest") {
    r = run_backtest(config);
  } else if (command == "compare") {
    r = run_compare(config);
  } else {
    throw std::invalid_argument("unknown command in config: " + command);
  }
  r.config = config;
  r.version = BLX_VERSION;
  r.diagnostics["kernel"] = std::string(simd::isa_name(simd::active_kernels().isa));
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           started)
                     .count();
  return r;
}

namespace {

struct BandFlags {
  int n_modes = 45;
  std::string omega = "pi/4";
  double ridge = 0.0;
  int ma_width = 5;
  std::string ma_boundary = "replicate-first-full";
};

void add_band_flags(CLI::App* cmd, BandFlags& f) {
  cmd->add_option("--n-modes", f.n_modes, "N; the fit uses 2N+1 coefficients")->capture_default_str();
  cmd->add_option("--omega", f.omega, "band limit in radians per sample, e.g. pi/4")
      ->capture_default_str();
  cmd->add_option("--ridge", f.ridge, "Tikhonov weight")->capture_default_str();
  cmd->add_option("--ma-width", f.ma_width, "moving average width (odd)")->capture_default_str();
  cmd->add_option("--ma-boundary", f.ma_boundary, "replicate-first-full | shrink-window")
      ->capture_default_str();
}

void put_band(json& c, const BandFlags& f) {
  c["n_modes"] = f.n_modes;
  c["omega"] = parse_omega(f.omega);
  c["omega_text"] = f.omega;
  c["ridge"] = f.ridge;
  c["ma_width"] = f.ma_width;
  c["ma_boundary"] = f.ma_boundary;
}

struct DataFlags {
  std::string input;
  std::string column = "1";
  bool no_header = false;
  std::string date_column;
  int window = 91;
  int horizon = 20;
  std::string correction = "fixed";
  int baseline = 90;
  int burn_in = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--input", f.input, "CSV file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--column", f.column, "value column: header name or 0-based index")
      ->capture_default_str();
  cmd->add_flag("--no-header", f.no_header, "first row is data");
  cmd->add_option("--date-column", f.date_column, "date column carried through (not used in math)");
  cmd->add_option("--window", f.window, "history window length")->capture_default_str();
  cmd->add_option("--horizon", f.horizon, "forecast days per fit")->capture_default_str();
  cmd->add_option("--correction", f.correction,
                  "none | last-mv | mean-last-5-mv | historical-rebase | fixed, '+'-joined")
      ->capture_default_str();
  cmd->add_option("--baseline", f.baseline, "linear baseline lookback A (0 disables)")
      ->capture_default_str();
  cmd->add_option("--burn-in", f.burn_in, "emitted days excluded from residuals")
      ->capture_default_str();
}

void put_data(json& c, const DataFlags& f) {
  c["input"] = f.input;
  c["column"] = column_json(f.column);
  c["skip_header"] = !f.no_header;
  c["date_column"] = f.date_column.empty() ? json(nullptr) : column_json(f.date_column);
  c["window"] = f.window;
  c["horizon"] = f.horizon;
  c["correction"] = LevelCorrection::parse(f.correction).to_string();
  c["baseline"] = f.baseline;
  c["burn_in"] = f.burn_in;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Causal band-limited smoothing and extrapolation of time series", "blx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BLX_VERSION);

  std::string out_path;
  std::string plot_path;
  bool verbose = false;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the JSON report here (default: stdout)");
    cmd->add_option("--plot-csv", plot_path, "write long-format plot data here");
    cmd->add_flag("--verbose", verbose, "log fit diagnostics to stderr");
  };

  auto* sim = app.add_subcommand("simulate", "Monte Carlo extrapolation experiment");
  BandFlags sim_band;
  sim_band.ridge = 0.05;
  int trials = 10000;
  int sim_horizon = 20;
  int sim_window = 0;
  std::uint64_t seed = 42;
  double sigma = 1.0, z0 = 1.0, coeff_low = 0.0, coeff_high = 1.0;
  add_band_flags(sim, sim_band);
  sim->add_option("--trials", trials, "number of trials")->capture_default_str();
  sim->add_option("--horizon", sim_horizon, "extrapolated points")->capture_default_str();
  sim->add_option("--window", sim_window, "history window length (default 2N+1)");
  sim->add_option("--seed", seed, "base seed; trial i uses seed ^ i")->capture_default_str();
  sim->add_option("--sigma", sigma, "noise scale")->capture_default_str();
  sim->add_option("--z0", z0, "initial value")->capture_default_str();
  sim->add_option("--coeff-low", coeff_low, "lower bound of A(t)")->capture_default_str();
  sim->add_option("--coeff-high", coeff_high, "upper bound of A(t)")->capture_default_str();
  add_output(sim);

  auto* fc = app.add_subcommand("forecast", "single forecast from the first window");
  BandFlags fc_band;
  fc_band.ridge = 0.1;
  DataFlags fc_data;
  add_band_flags(fc, fc_band);
  add_data_flags(fc, fc_data);
  add_output(fc);

  auto* bt = app.add_subcommand("backtest", "rolling forecasts against a linear baseline");
  BandFlags bt_band;
  bt_band.ridge = 0.1;
  DataFlags bt_data;
  bt_data.horizon = 5;
  bt_data.correction = "historical-rebase+mean-last-5-mv";
  int repetitions = 1;
  std::string overlap = "skip-first-horizon";
  add_band_flags(bt, bt_band);
  add_data_flags(bt, bt_data);
  bt->add_option("--repetitions", repetitions, "number of forecast blocks")->capture_default_str();
  bt->add_option("--overlap", overlap, "none | skip-first-horizon")->capture_default_str();
  add_output(bt);

  auto* cmp = app.add_subcommand("compare", "compare residual reports from two report files");
  std::string file_a, file_b, label_a = "causal", label_b = "linear";
  cmp->add_option("a", file_a, "first report")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", file_b, "second report")->required()->check(CLI::ExistingFile);
  cmp->add_option("--label-a", label_a, "report label in the first file")->capture_default_str();
  cmp->add_option("--label-b", label_b, "report label in the second file")->capture_default_str();
  add_output(cmp);

  auto* rerun = app.add_subcommand("rerun", "regenerate a report from its echoed config");
  std::string rerun_path;
  rerun->add_option("report", rerun_path, "report file")->required()->check(CLI::ExistingFile);
  add_output(rerun);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  json config;
  try {
    if (*sim) {
      config["command"] = "simulate";
      config["trials"] = trials;
      put_band(config, sim_band);
      config["window"] = sim_window > 0 ? sim_window : 2 * sim_band.n_modes + 1;
      config["horizon"] = sim_horizon;
      config["seed"] = seed;
      config["sigma"] = sigma;
      config["z0"] = z0;
      config["coeff_low"] = coeff_low;
      config["coeff_high"] = coeff_high;
      config["rng_stream"] = PathRng::stream_version;
    } else if (*fc) {
      config["command"] = "forecast";
      put_data(config, fc_data);
      put_band(config, fc_band);
    } else if (*bt) {
      config["command"] = "backtest";
      put_data(config, bt_data);
      put_band(config, bt_band);
      config["repetitions"] = repetitions;
      config["overlap"] = std::string(to_string(parse_overlap(overlap)));
    } else if (*cmp) {
      config["command"] = "compare";
      config["a"] = file_a;
      config["b"] = file_b;
      config["label_a"] = label_a;
      config["label_b"] = label_b;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "blx: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*rerun) {
      const RunReport previous = parse_report(read_file(rerun_path));
      config = previous.config;
    }
    const RunReport report = execute(config);
    if (verbose) {
      for (const auto& [key, value] : report.diagnostics.items()) {
        std::cerr << "blx: " << key << " = " << value.dump() << "\n";
      }
    }
    const std::string text = emit_report(report, ReportFormat::json);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text(out_path, text);
    }
    if (!plot_path.empty()) write_text(plot_path, emit_report(report, ReportFormat::csv));
  } catch (const std::invalid_argument& e) {
    std::cerr << "blx: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "blx: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(args.size()), argv.data());
}

}  // namespace blx
