#include "gamchain/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gamchain/errors.hpp"
#include "gamchain/special.hpp"

namespace gamchain {
namespace {

using json = nlohmann::ordered_json;

// Shortest round-trip decimal form, locale independent.
std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw numeric_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

json params_to_json(const FitReport& report) {
  json j;
  j["engine"] = report.engine;
  if (report.engine == "c1" || report.engine == "c2") {
    j["step_variance"] = report.logn_params.step_variance;
  } else {
    j["shape_a"] = report.params.shape_a;
  }
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["objective_trace"] = report.objective_trace;
  if (report.engine != "c1" && report.engine != "c2") {
    j["a_trace"] = report.a_trace;
  } else {
    j["s2_trace"] = report.a_trace;
  }
  return j;
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw input_error(std::string(what) + ": malformed json");
  return j;
}

std::vector<double> require_array(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw input_error(std::string(what) + ": missing array field '" + key + "'");
  }
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw input_error(std::string(what) + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

double require_number(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw input_error(std::string(what) + ": missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

std::string require_string(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw input_error(std::string(what) + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

std::string fit_report_json(const FitReport& report, bool include_timings) {
  json j = params_to_json(report);
  j["estep_seconds"] = include_timings ? report.estep_seconds : 0.0;
  j["mstep_seconds"] = include_timings ? report.mstep_seconds : 0.0;
  return j.dump(2) + "\n";
}

std::string residual_report_json(const ResidualReport& report) {
  json j;
  j["instrument_id"] = report.instrument_id;
  j["engine"] = report.engine;
  j["residual_count"] = report.residual_count;
  j["ks_statistic"] = report.ks_statistic;
  j["p_value"] = report.p_value;
  j["passed"] = report.passed;
  return j.dump(2) + "\n";
}

std::string bench_reports_json(const std::vector<BenchReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["engine"] = r.engine;
    j["sequence_length"] = r.sequence_length;
    j["particles"] = r.particles;
    j["iterations"] = r.iterations;
    j["estep_seconds"] = r.estep_seconds;
    j["mstep_seconds"] = r.mstep_seconds;
    j["total_seconds"] = r.total_seconds;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string bench_reports_csv(const std::vector<BenchReport>& reports) {
  std::string out = "engine,sequence_length,particles,iterations,estep_seconds,mstep_seconds,total_seconds\n";
  for (const auto& r : reports) {
    out += r.engine;
    out += ',';
    out += std::to_string(r.sequence_length);
    out += ',';
    out += std::to_string(r.particles);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += format_double(r.estep_seconds);
    out += ',';
    out += format_double(r.mstep_seconds);
    out += ',';
    out += format_double(r.total_seconds);
    out += '\n';
  }
  return out;
}

std::string timing_records_csv(const std::vector<FunctionTimingRecord>& records) {
  std::string out = "function,mean_eval_seconds,sample_count\n";
  for (const auto& r : records) {
    out += r.function_name;
    out += ',';
    out += format_double(r.mean_eval_time);
    out += ',';
    out += std::to_string(r.sample_count);
    out += '\n';
  }
  return out;
}

std::string gamma_posterior_json(const GammaPosterior& posterior) {
  json j;
  j["kind"] = "gamma";
  j["a_u"] = posterior.a_u;
  j["b_u"] = posterior.b_u;
  j["a_v"] = posterior.a_v;
  j["b_v"] = posterior.b_v;
  return j.dump(2) + "\n";
}

GammaPosterior parse_gamma_posterior(const std::string& text) {
  json j = parse_json(text, "gamma posterior");
  if (require_string(j, "kind", "gamma posterior") != "gamma") {
    throw input_error("gamma posterior: kind mismatch");
  }
  GammaPosterior p;
  p.a_u = require_array(j, "a_u", "gamma posterior");
  p.b_u = require_array(j, "b_u", "gamma posterior");
  p.a_v = require_array(j, "a_v", "gamma posterior");
  p.b_v = require_array(j, "b_v", "gamma posterior");
  if (p.a_u.size() != p.b_u.size() || p.a_v.size() != p.b_v.size() || p.a_u.empty()) {
    throw input_error("gamma posterior: inconsistent array lengths");
  }
  return p;
}

std::string gaussian_posterior_json(const GaussianPosterior& posterior) {
  json j;
  j["kind"] = "gaussian";
  j["mu"] = posterior.mu;
  j["sigma2"] = posterior.sigma2;
  return j.dump(2) + "\n";
}

GaussianPosterior parse_gaussian_posterior(const std::string& text) {
  json j = parse_json(text, "gaussian posterior");
  if (require_string(j, "kind", "gaussian posterior") != "gaussian") {
    throw input_error("gaussian posterior: kind mismatch");
  }
  GaussianPosterior p;
  p.mu = require_array(j, "mu", "gaussian posterior");
  p.sigma2 = require_array(j, "sigma2", "gaussian posterior");
  if (p.mu.size() != p.sigma2.size() || p.mu.empty()) {
    throw input_error("gaussian posterior: inconsistent array lengths");
  }
  return p;
}

std::string trajectories_json(const Trajectories& trajectories) {
  json j;
  j["kind"] = "trajectories";
  j["model"] = trajectories.kind;
  j["count"] = trajectories.count;
  j["length"] = trajectories.length;
  j["values"] = trajectories.values;
  j["v_values"] = trajectories.v_values;
  return j.dump(2) + "\n";
}

Trajectories parse_trajectories(const std::string& text) {
  json j = parse_json(text, "trajectories");
  if (require_string(j, "kind", "trajectories") != "trajectories") {
    throw input_error("trajectories: kind mismatch");
  }
  Trajectories t;
  t.kind = require_string(j, "model", "trajectories");
  t.count = static_cast<std::size_t>(require_number(j, "count", "trajectories"));
  t.length = static_cast<std::size_t>(require_number(j, "length", "trajectories"));
  t.values = require_array(j, "values", "trajectories");
  t.v_values = require_array(j, "v_values", "trajectories");
  if (t.values.size() != t.count * t.length) {
    throw input_error("trajectories: values size mismatch");
  }
  return t;
}

std::string posterior_kind(const std::string& text) {
  json j = parse_json(text, "posterior");
  return require_string(j, "kind", "posterior");
}

std::string dataset_sidecar_json(const SyntheticDataset& dataset) {
  json j;
  j["model"] = dataset.model;
  j["seed"] = dataset.seed;
  if (dataset.model == "gam") {
    j["shape_a"] = dataset.gam_params.shape_a;
  } else {
    j["step_variance"] = dataset.logn_params.step_variance;
  }
  j["instrument_id"] = dataset.series.instrument_id;
  j["period"] = dataset.series.period;
  j["returns"] = dataset.series.returns;
  j["latent_u"] = dataset.latents.u;
  j["latent_v"] = dataset.latents.v;
  return j.dump(2) + "\n";
}

SyntheticDataset parse_dataset_sidecar(const std::string& text) {
  json j = parse_json(text, "dataset sidecar");
  SyntheticDataset d;
  d.model = require_string(j, "model", "dataset sidecar");
  d.seed = static_cast<std::uint64_t>(require_number(j, "seed", "dataset sidecar"));
  if (d.model == "gam") {
    d.gam_params.shape_a = require_number(j, "shape_a", "dataset sidecar");
  } else if (d.model == "logn") {
    d.logn_params.step_variance = require_number(j, "step_variance", "dataset sidecar");
  } else {
    throw input_error("dataset sidecar: unknown model '" + d.model + "'");
  }
  d.series.instrument_id = require_string(j, "instrument_id", "dataset sidecar");
  d.series.period = require_string(j, "period", "dataset sidecar");
  d.series.returns = require_array(j, "returns", "dataset sidecar");
  d.latents.u = require_array(j, "latent_u", "dataset sidecar");
  d.latents.v = require_array(j, "latent_v", "dataset sidecar");
  return d;
}

std::string bars_csv_from_returns(const ReturnSeries& series, double base_close,
                                  std::int64_t t0, std::int64_t dt) {
  if (!(base_close > 0.0) || !std::isfinite(base_close)) {
    throw config_error("bars_csv_from_returns: base_close must be positive");
  }
  if (dt <= 0) throw config_error("bars_csv_from_returns: dt must be positive");
  std::string out = "timestamp,close,volume\n";
  // Closes are built from the cumulative log sum so each close carries the
  // exact partial sum; load_bars + to_returns then recovers the returns to
  // rounding error.
  double log_close = std::log(base_close);
  std::int64_t ts = t0;
  auto append_row = [&out](std::int64_t t, double close) {
    out += std::to_string(t);
    out += ',';
    out += format_double(close);
    out += ",1\n";
  };
  append_row(ts, std::exp(log_close));
  for (double r : series.returns) {
    log_close += r;
    ts += dt;
    if (!std::isfinite(log_close) || std::abs(log_close) > 700.0) {
      throw numeric_error("bars_csv_from_returns: cumulative log close out of range");
    }
    append_row(ts, std::exp(log_close));
  }
  return out;
}

std::string qq_csv(const std::vector<double>& residuals) {
  if (residuals.empty()) throw input_error("qq_csv: empty residual sample");
  std::vector<double> sorted = residuals;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "theoretical,empirical\n";
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out += format_double(standard_normal_quantile(p));
    out += ',';
    out += format_double(sorted[i]);
    out += '\n';
  }
  return out;
}

std::string moments_csv(const std::vector<MomentRow>& rows) {
  std::string out = "a,variance,kurtosis\n";
  for (const auto& row : rows) {
    out += format_double(row.a);
    out += ',';
    out += format_double(row.variance);
    out += ',';
    out += format_double(row.kurtosis);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw input_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gamchain
