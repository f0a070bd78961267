#include <charconv>
#include <sstream>
#include <stdexcept>

#include "blx/errors.hpp"
#include "blx/io.hpp"

namespace blx {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const ResidualReport* RunReport::find_report(std::string_view label) const {
  for (const auto& r : reports) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

const Series* RunReport::find_series(std::string_view name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s.series;
  }
  return nullptr;
}

json to_json(const ResidualReport& r) {
  json j;
  j["label"] = r.label;
  j["metric"] = std::string(to_string(r.metric));
  j["n_points"] = r.n_points;
  j["total"] = r.total;
  j["mean"] = r.mean;
  j["per_point"] = r.per_point;
  return j;
}

ResidualReport residual_report_from_json(const json& j) {
  ResidualReport r;
  r.label = j.at("label").get<std::string>();
  r.metric = parse_metric(j.at("metric").get<std::string>());
  r.n_points = j.at("n_points").get<int>();
  r.total = j.at("total").get<double>();
  r.mean = j.at("mean").get<double>();
  r.per_point = j.at("per_point").get<std::vector<double>>();
  return r;
}

namespace {

json to_json(const TrialAggregate& a) {
  json j;
  j["n_trials"] = a.n_trials;
  j["smoothing_total"] = a.smoothing_total;
  j["smoothing_per_point"] = a.smoothing_per_point;
  j["smoothing_total_squared"] = a.smoothing_total_squared;
  j["extrap_total"] = a.extrap_total;
  j["extrap_per_point"] = a.extrap_per_point;
  j["per_point"] = a.per_point;
  j["per_point_squared"] = a.per_point_squared;
  return j;
}

TrialAggregate aggregate_from_json(const json& j) {
  TrialAggregate a;
  a.n_trials = j.at("n_trials").get<int>();
  a.smoothing_total = j.at("smoothing_total").get<double>();
  a.smoothing_per_point = j.at("smoothing_per_point").get<double>();
  a.smoothing_total_squared = j.at("smoothing_total_squared").get<double>();
  a.extrap_total = j.at("extrap_total").get<double>();
  a.extrap_per_point = j.at("extrap_per_point").get<double>();
  a.per_point = j.at("per_point").get<std::vector<double>>();
  a.per_point_squared = j.at("per_point_squared").get<std::vector<double>>();
  return a;
}

json to_json(const ComparisonReport& c) {
  json j;
  j["winner"] = c.winner;
  j["margin_per_point"] = c.margin_per_point;
  j["causal"] = to_json(c.causal);
  j["linear"] = to_json(c.linear);
  return j;
}

ComparisonReport comparison_from_json(const json& j) {
  return ComparisonReport{residual_report_from_json(j.at("causal")),
                          residual_report_from_json(j.at("linear")),
                          j.at("winner").get<std::string>(),
                          j.at("margin_per_point").get<double>()};
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "series,t,value\n";
    for (const auto& ns : report.series) {
      for (std::size_t i = 0; i < ns.series.size(); ++i) {
        out += ns.name;
        out += ',';
        out += std::to_string(ns.series.start() + static_cast<Time>(i));
        out += ',';
        out += format_double(ns.series[i]);
        out += '\n';
      }
    }
    return out;
  }

  json j;
  j["version"] = report.version;
  j["config"] = report.config;
  json reports = json::array();
  for (const auto& r : report.reports) reports.push_back(to_json(r));
  j["reports"] = std::move(reports);
  if (report.comparison) j["comparison"] = to_json(*report.comparison);
  if (report.simulation) j["simulation"] = to_json(*report.simulation);
  json series = json::array();
  for (const auto& ns : report.series) {
    json s;
    s["name"] = ns.name;
    s["start"] = ns.series.start();
    s["values"] = std::vector<double>(ns.series.values().begin(), ns.series.values().end());
    series.push_back(std::move(s));
  }
  j["series"] = std::move(series);
  j["diagnostics"] = report.diagnostics;
  j["timing"] = json{{"elapsed_ms", report.elapsed_ms}};
  return j.dump(2) + "\n";
}

RunReport parse_report(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    RunReport r;
    r.version = j.value("version", "");
    r.config = j.value("config", json::object());
    for (const auto& item : j.value("reports", json::array())) {
      r.reports.push_back(residual_report_from_json(item));
    }
    if (j.contains("comparison")) r.comparison = comparison_from_json(j.at("comparison"));
    if (j.contains("simulation")) r.simulation = aggregate_from_json(j.at("simulation"));
    for (const auto& item : j.value("series", json::array())) {
      r.series.push_back({item.at("name").get<std::string>(),
                          Series(item.at("start").get<Time>(),
                                 item.at("values").get<std::vector<double>>())});
    }
    r.diagnostics = j.value("diagnostics", json::object());
    if (j.contains("timing")) r.elapsed_ms = j.at("timing").value("elapsed_ms", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace blx
