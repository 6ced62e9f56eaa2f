// gamchain CLI: fit volatility models to bar files, simulate synthetic data,
// run residual diagnostics, tabulate increment moments, and benchmark the
// estimation engines.
//
// Exit codes: 0 success, 1 bad input or configuration, 2 numeric failure
// (non-convergence, or a failing self-check in `derivations`).
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gamchain/bench.hpp"
#include "gamchain/derivations.hpp"
#include "gamchain/errors.hpp"
#include "gamchain/evaluation.hpp"
#include "gamchain/ingest.hpp"
#include "gamchain/laplace.hpp"
#include "gamchain/mc.hpp"
#include "gamchain/model.hpp"
#include "gamchain/report_io.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/simulator.hpp"
#include "gamchain/timing.hpp"
#include "gamchain/types.hpp"
#include "gamchain/vi.hpp"

namespace {

using gamchain::config_error;
using gamchain::input_error;

// Flat key=value file; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw input_error("config: cannot open " + path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t row = 0;
  while (std::getline(file, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw input_error("config: " + path + " line " + std::to_string(row) +
                        ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw input_error("config: " + path + " line " + std::to_string(row) +
                        ": empty key");
    }
    values[key] = value;
  }
  return values;
}

// Fills every option the command line left untouched from the config map;
// precedence is flags > config file > defaults. Unknown keys are rejected.
void apply_config(CLI::App& app, const std::map<std::string, std::string>& values) {
  std::map<std::string, CLI::Option*> by_name;
  for (CLI::Option* opt : app.get_options()) {
    for (const std::string& name : opt->get_lnames()) by_name[name] = opt;
  }
  for (const auto& [key, value] : values) {
    auto it = by_name.find(key);
    if (it == by_name.end()) throw config_error("config: unknown key '" + key + "'");
    if (it->second->count() > 0) continue;  // explicit flag wins
    it->second->add_result(value);
    it->second->run_callback();
  }
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("GAMCHAIN_REPORT_DIR"); env && *env) return env;
  return ".";
}

gamchain::ReturnSeries load_series(const std::string& input,
                                   const std::string& instrument) {
  const auto bars = gamchain::load_bars(input);
  const std::string label =
      instrument.empty() ? std::filesystem::path(input).stem().string() : instrument;
  return gamchain::to_returns(bars, label);
}

void write_report_file(const std::filesystem::path& dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(dir);
  gamchain::write_text_file(dir / name, content);
}

// start:stop:count, geometric spacing.
std::vector<double> parse_geometric_grid(const std::string& text) {
  double start = 0.0, stop = 0.0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' ||
      !in.eof()) {
    throw input_error("grid: expected start:stop:count, got '" + text + "'");
  }
  if (!(start > 0.0) || !(stop > start) || count < 2) {
    throw input_error("grid: need 0 < start < stop and count >= 2");
  }
  std::vector<double> grid(count);
  const double ratio = std::log(stop / start) / (count - 1);
  for (int i = 0; i < count; ++i) grid[i] = start * std::exp(ratio * i);
  return grid;
}

int run_fit(const std::string& input, const std::string& instrument,
            const std::string& engine, bool paper_literal, std::uint64_t seed,
            int particles, int max_rounds, double tol_a, int sweeps, double a0,
            double s2_0, double damping, bool timings, const std::string& out_dir) {
  const gamchain::ReturnSeries series = load_series(input, instrument);
  const std::filesystem::path dir = resolve_out_dir(out_dir);

  gamchain::FitReport report;
  std::string posterior_text;
  if (engine == "c3") {
    gamchain::FitConfig config;
    config.paper_literal = paper_literal;
    if (max_rounds > 0) config.max_rounds = max_rounds;
    if (tol_a > 0.0) config.tol_a = tol_a;
    if (sweeps > 0) config.sweeps = sweeps;
    config.a0 = a0;
    const gamchain::FitResult result = gamchain::fit(series, config);
    report = result.report;
    posterior_text = gamchain::gamma_posterior_json(result.posterior);
  } else if (engine == "c1") {
    gamchain::LaplaceFitConfig config;
    if (max_rounds > 0) config.max_rounds = max_rounds;
    if (tol_a > 0.0) config.tol = tol_a;
    if (sweeps > 0) config.sweeps = sweeps;
    config.s2_0 = s2_0;
    if (damping > 0.0) config.damping = damping;
    const gamchain::LaplaceFitResult result = gamchain::fit_logn_vi(series, config);
    report = result.report;
    posterior_text = gamchain::gaussian_posterior_json(result.posterior);
  } else if (engine == "c2" || engine == "c4") {
    gamchain::McFitConfig config;
    config.particles = particles;
    if (max_rounds > 0) config.max_rounds = max_rounds;
    if (tol_a > 0.0) config.tol = tol_a;
    config.a0 = a0;
    config.s2_0 = s2_0;
    gamchain::Rng rng(seed);
    const gamchain::McVariant variant =
        engine == "c4" ? gamchain::McVariant::gam : gamchain::McVariant::logn;
    const gamchain::McFitResult result = gamchain::fit_mc(series, variant, config, rng);
    report = result.report;
    posterior_text = gamchain::trajectories_json(result.trajectories);
  } else {
    throw config_error("fit: unknown engine '" + engine + "'");
  }

  write_report_file(dir, "fit_report.json", gamchain::fit_report_json(report, timings));
  write_report_file(dir, "posterior.json", posterior_text);
  const bool logn_engine = report.engine == "c1" || report.engine == "c2";
  std::cout << "engine=" << report.engine
            << (logn_engine ? " step_variance=" : " shape_a=")
            << (logn_engine ? report.logn_params.step_variance : report.params.shape_a)
            << " iterations=" << report.iterations
            << " converged=" << (report.converged ? "yes" : "no") << "\n";
  return report.converged ? 0 : 2;
}

int run_simulate(const std::string& model, std::size_t length, double shape_a,
                 double step_variance, double u0, std::uint64_t seed,
                 const std::string& instrument, const std::string& period,
                 const std::string& out_dir) {
  gamchain::Rng rng(seed);
  gamchain::SyntheticDataset dataset;
  if (model == "gam") {
    dataset = gamchain::simulate_gamchain(gamchain::GamChainParams{shape_a}, length,
                                          u0, rng);
  } else if (model == "logn") {
    dataset =
        gamchain::simulate_logn(gamchain::LogNParams{step_variance}, length, u0, rng);
  } else {
    throw config_error("simulate: model must be gam or logn");
  }
  dataset.seed = seed;
  dataset.series.instrument_id = instrument;
  dataset.series.period = period;

  const std::filesystem::path dir = resolve_out_dir(out_dir);
  // The sidecar holds the exact returns and latents and is always written.
  // Bar closes live in price space, so a path whose cumulative log close
  // leaves double range cannot be written as bars; the sidecar still can.
  std::string files = (dir / (instrument + "_dataset.json")).string();
  bool bars_written = true;
  try {
    write_report_file(dir, instrument + "_bars.csv",
                      gamchain::bars_csv_from_returns(dataset.series));
    files = (dir / (instrument + "_bars.csv")).string() + "," + files;
  } catch (const gamchain::numeric_error&) {
    bars_written = false;
  }
  write_report_file(dir, instrument + "_dataset.json",
                    gamchain::dataset_sidecar_json(dataset));
  if (!bars_written) {
    std::cerr << "note: cumulative log close leaves double range; bars CSV "
                 "omitted, dataset sidecar carries the exact series\n";
  }
  std::cout << "model=" << model << " length=" << length << " seed=" << seed
            << " files=" << files << "\n";
  return 0;
}

int run_residuals(const std::string& input, const std::string& instrument,
                  const std::string& posterior_path, bool raw, std::uint64_t seed,
                  double alpha, const std::string& engine_label,
                  const std::string& out_dir) {
  const gamchain::ReturnSeries series = load_series(input, instrument);
  gamchain::Rng rng(seed);
  std::vector<double> residuals;
  std::string engine = engine_label;
  if (raw) {
    residuals = gamchain::raw_residuals(series);
    if (engine.empty()) engine = "raw";
  } else {
    if (posterior_path.empty()) {
      throw input_error("residuals: --posterior is required unless --raw is given");
    }
    const std::string text = gamchain::read_text_file(posterior_path);
    const std::string kind = gamchain::posterior_kind(text);
    if (kind == "gamma") {
      residuals =
          gamchain::draw_residuals(gamchain::parse_gamma_posterior(text), series, rng);
    } else if (kind == "gaussian") {
      residuals = gamchain::draw_residuals(gamchain::parse_gaussian_posterior(text),
                                           series, rng);
    } else {
      residuals =
          gamchain::draw_residuals(gamchain::parse_trajectories(text), series, rng);
    }
  }
  gamchain::ResidualReport report = gamchain::ks_test_standard_normal(residuals, alpha);
  report.instrument_id = series.instrument_id;
  report.engine = engine;

  const std::filesystem::path dir = resolve_out_dir(out_dir);
  write_report_file(dir, "residual_report.json", gamchain::residual_report_json(report));
  write_report_file(dir, "qq.csv", gamchain::qq_csv(residuals));
  std::cout << "instrument=" << report.instrument_id << " n=" << report.residual_count
            << " ks=" << report.ks_statistic << " p=" << report.p_value << " "
            << (report.passed ? "PASS" : "FAIL") << "\n";
  return 0;
}

int run_moments(const std::string& grid_text, const std::string& out_file) {
  const std::vector<double> grid = parse_geometric_grid(grid_text);
  std::vector<gamchain::MomentRow> rows;
  rows.reserve(grid.size());
  for (double a : grid) {
    const gamchain::GamChainParams params{a};
    rows.push_back({a, gamchain::increment_variance(params),
                    gamchain::increment_kurtosis(params)});
  }
  const std::string csv = gamchain::moments_csv(rows);
  if (out_file.empty()) {
    std::cout << csv;
  } else {
    gamchain::write_text_file(out_file, csv);
  }
  return 0;
}

int run_bench(const std::string& input, const std::vector<std::string>& engines,
              const std::vector<std::size_t>& lengths, int particles,
              std::size_t iterations, std::size_t repetitions, std::uint64_t seed,
              double a0, double s2_0, const std::string& format,
              const std::string& out_file) {
  gamchain::BenchConfig config;
  if (!engines.empty()) config.engines = engines;
  if (!lengths.empty()) config.lengths = lengths;
  config.particles = particles;
  config.iterations = iterations;
  config.repetitions = repetitions;
  config.seed = seed;
  config.shape_a0 = a0;
  config.s2_0 = s2_0;

  gamchain::ReturnSeries series;
  if (!input.empty()) {
    series = load_series(input, "");
  } else {
    std::size_t max_length = 2;
    for (std::size_t length : config.lengths) max_length = std::max(max_length, length);
    gamchain::Rng rng(seed);
    series = gamchain::simulate_gamchain(gamchain::GamChainParams{1.0}, max_length,
                                         1.0, rng)
                 .series;
  }
  const auto reports = gamchain::run_benchmark(series, config);
  const std::string text = format == "json" ? gamchain::bench_reports_json(reports)
                                            : gamchain::bench_reports_csv(reports);
  if (out_file.empty()) {
    std::cout << text;
  } else {
    gamchain::write_text_file(out_file, text);
  }
  return 0;
}

int run_derivations(const std::string& out_file) {
  const auto checks = gamchain::run_all_checks();
  const std::string text = gamchain::render_markdown(checks);
  if (out_file.empty()) {
    std::cout << text;
  } else {
    gamchain::write_text_file(out_file, text);
  }
  for (const auto& check : checks) {
    if (!check.passed) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent-volatility model fitting and diagnostics"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "fit a volatility model to a bar CSV file");
  std::string fit_input, fit_instrument, fit_engine = "c3", fit_config_file;
  std::string fit_out_dir;
  bool fit_literal = false, fit_timings = false;
  std::uint64_t fit_seed = 42;
  int fit_particles = 20, fit_rounds = 0, fit_sweeps = 0;
  double fit_tol_a = 0.0, fit_a0 = 1.0, fit_s2_0 = 1.0, fit_damping = 0.0;
  fit->add_option("--input", fit_input, "bar CSV file (timestamp,close,volume)");
  fit->add_option("--instrument", fit_instrument,
                  "instrument label (default: input file stem)");
  fit->add_option("--engine", fit_engine,
                  "estimation engine: c1 (lognormal VI), c2 (lognormal MC), "
                  "c3 (gamma-chain VI), c4 (gamma-chain MC)")
      ->check(CLI::IsMember({"c1", "c2", "c3", "c4"}));
  fit->add_flag("--paper-literal", fit_literal,
                "use the printed update rows verbatim (c3 only)");
  fit->add_option("--seed", fit_seed, "RNG seed for the MC engines");
  fit->add_option("--particles", fit_particles, "particle count for c2/c4");
  fit->add_option("--max-rounds", fit_rounds, "EM round cap");
  fit->add_option("--tol-a", fit_tol_a, "relative parameter tolerance");
  fit->add_option("--sweeps", fit_sweeps, "coordinate sweeps per E-step (c1/c3)");
  fit->add_option("--a0", fit_a0, "initial shape (c3/c4)");
  fit->add_option("--s2-0", fit_s2_0, "initial step variance (c1/c2)");
  fit->add_option("--damping", fit_damping, "mode-update damping in (0,1] (c1)");
  fit->add_flag("--timings", fit_timings, "include wall-clock fields in the report");
  fit->add_option("--config", fit_config_file, "key=value config file");
  fit->add_option("--out-dir", fit_out_dir,
                  "report directory (default: $GAMCHAIN_REPORT_DIR, else .)");

  // simulate -----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate synthetic bars and a sidecar");
  std::string sim_model = "gam", sim_instrument = "SYN", sim_period = "1m";
  std::string sim_config_file, sim_out_dir;
  std::size_t sim_length = 0;
  double sim_shape_a = 1.0, sim_s2 = 1.0, sim_u0 = 1.0;
  std::uint64_t sim_seed = 42;
  sim->add_option("--model", sim_model, "gam or logn")
      ->check(CLI::IsMember({"gam", "logn"}));
  sim->add_option("--length", sim_length, "number of returns")->required();
  sim->add_option("--shape-a", sim_shape_a, "gamma-chain shape A (gam)");
  sim->add_option("--step-variance", sim_s2, "log-volatility step variance (logn)");
  sim->add_option("--u0", sim_u0, "initial precision");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--instrument", sim_instrument, "instrument label");
  sim->add_option("--period", sim_period, "bar period label");
  sim->add_option("--config", sim_config_file, "key=value config file");
  sim->add_option("--out-dir", sim_out_dir,
                  "output directory (default: $GAMCHAIN_REPORT_DIR, else .)");

  // residuals ------------------------------------------------------------
  auto* res = app.add_subcommand(
      "residuals", "KS normality test of posterior-standardized residuals");
  std::string res_input, res_instrument, res_posterior, res_engine;
  std::string res_config_file, res_out_dir;
  bool res_raw = false;
  std::uint64_t res_seed = 42;
  double res_alpha = 0.05;
  res->add_option("--input", res_input, "bar CSV file");
  res->add_option("--instrument", res_instrument, "instrument label");
  res->add_option("--posterior", res_posterior, "posterior.json from `fit`");
  res->add_flag("--raw", res_raw, "test the unstandardized returns instead");
  res->add_option("--seed", res_seed, "RNG seed for posterior draws");
  res->add_option("--alpha", res_alpha, "KS significance level");
  res->add_option("--engine", res_engine, "engine label recorded in the report");
  res->add_option("--config", res_config_file, "key=value config file");
  res->add_option("--out-dir", res_out_dir,
                  "report directory (default: $GAMCHAIN_REPORT_DIR, else .)");

  // moments --------------------------------------------------------------
  auto* mom = app.add_subcommand(
      "moments", "increment variance/kurtosis over a geometric shape grid");
  std::string mom_grid = "0.1:100:31", mom_out;
  mom->add_option("--a-grid", mom_grid, "start:stop:count, geometric");
  mom->add_option("--out", mom_out, "CSV output file (default: stdout)");

  // bench ----------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "time E-step/M-step rounds per engine");
  std::string bench_input, bench_format = "csv", bench_out, bench_config_file;
  std::vector<std::string> bench_engines;
  std::vector<std::size_t> bench_lengths;
  int bench_particles = 2;
  std::size_t bench_iterations = 1000, bench_repetitions = 3;
  std::uint64_t bench_seed = 42;
  double bench_a0 = 1.0, bench_s2_0 = 1.0;
  bench->add_option("--input", bench_input,
                    "bar CSV file (default: synthetic gamma-chain data)");
  bench->add_option("--engines", bench_engines, "engines to time")
      ->delimiter(',');
  bench->add_option("--lengths", bench_lengths, "series length prefixes")
      ->delimiter(',');
  bench->add_option("--particles", bench_particles, "particle count for c2/c4");
  bench->add_option("--iterations", bench_iterations, "timed EM rounds per repetition");
  bench->add_option("--repetitions", bench_repetitions,
                    "repetitions (median by total time reported)");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--a0", bench_a0, "initial shape");
  bench->add_option("--s2-0", bench_s2_0, "initial step variance");
  bench->add_option("--format", bench_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", bench_out, "output file (default: stdout)");
  bench->add_option("--config", bench_config_file, "key=value config file");

  // derivations ------------------------------------------------------------
  auto* der = app.add_subcommand("derivations",
                                 "run the analytic self-checks and report results");
  std::string der_out;
  der->add_option("--out", der_out, "markdown output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fit->parsed()) {
      if (!fit_config_file.empty()) apply_config(*fit, load_config_file(fit_config_file));
      if (fit_input.empty()) throw input_error("fit: --input is required");
      return run_fit(fit_input, fit_instrument, fit_engine, fit_literal, fit_seed,
                     fit_particles, fit_rounds, fit_tol_a, fit_sweeps, fit_a0,
                     fit_s2_0, fit_damping, fit_timings, fit_out_dir);
    }
    if (sim->parsed()) {
      if (!sim_config_file.empty()) apply_config(*sim, load_config_file(sim_config_file));
      return run_simulate(sim_model, sim_length, sim_shape_a, sim_s2, sim_u0, sim_seed,
                          sim_instrument, sim_period, sim_out_dir);
    }
    if (res->parsed()) {
      if (!res_config_file.empty()) apply_config(*res, load_config_file(res_config_file));
      if (res_input.empty()) throw input_error("residuals: --input is required");
      return run_residuals(res_input, res_instrument, res_posterior, res_raw, res_seed,
                           res_alpha, res_engine, res_out_dir);
    }
    if (mom->parsed()) return run_moments(mom_grid, mom_out);
    if (bench->parsed()) {
      if (!bench_config_file.empty()) {
        apply_config(*bench, load_config_file(bench_config_file));
      }
      return run_bench(bench_input, bench_engines, bench_lengths, bench_particles,
                       bench_iterations, bench_repetitions, bench_seed, bench_a0,
                       bench_s2_0, bench_format, bench_out);
    }
    if (der->parsed()) return run_derivations(der_out);
  } catch (const gamchain::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
