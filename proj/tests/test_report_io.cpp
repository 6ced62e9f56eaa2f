// Report serialization: JSON round-trips, deterministic output, and CSV
// formats that interoperate with the ingestion path.
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "gamchain/errors.hpp"
#include "gamchain/ingest.hpp"
#include "gamchain/report_io.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/simulator.hpp"
#include "gamchain/types.hpp"

using namespace gamchain;

namespace {

GammaPosterior make_gamma_posterior() {
  GammaPosterior p;
  p.a_u = {1.5, 2.5, 1.75};
  p.b_u = {0.25, 1e-9, 3.0};
  p.a_v = {2.0, 2.0};
  p.b_v = {0.5, 0.125};
  return p;
}

}  // namespace

TEST_CASE("fit report JSON is deterministic and hides timings by default") {
  FitReport report;
  report.engine = "c3";
  report.params.shape_a = 1.25;
  report.objective_trace = {-10.5, -9.25, -9.0};
  report.a_trace = {1.0, 1.2, 1.25};
  report.iterations = 3;
  report.estep_seconds = 0.123;
  report.mstep_seconds = 0.456;
  report.converged = true;

  const std::string text = fit_report_json(report);
  CHECK(text == fit_report_json(report));
  CHECK(text.find("\"engine\": \"c3\"") != std::string::npos);
  CHECK(text.find("\"shape_a\": 1.25") != std::string::npos);
  CHECK(text.find("\"converged\": true") != std::string::npos);
  // Wall-clock noise zeroed out unless explicitly requested.
  CHECK(text.find("0.123") == std::string::npos);
  CHECK(text.find("0.456") == std::string::npos);
  const std::string with_times = fit_report_json(report, true);
  CHECK(with_times.find("0.123") != std::string::npos);
  CHECK(with_times.find("0.456") != std::string::npos);

  // Lognormal engines report the step variance instead of the shape.
  FitReport logn;
  logn.engine = "c1";
  logn.logn_params.step_variance = 0.75;
  logn.iterations = 1;
  const std::string logn_text = fit_report_json(logn);
  CHECK(logn_text.find("\"step_variance\": 0.75") != std::string::npos);
  CHECK(logn_text.find("shape_a") == std::string::npos);
}

TEST_CASE("residual report JSON carries all fields") {
  ResidualReport report;
  report.instrument_id = "SYN-1";
  report.ks_statistic = 0.03125;
  report.p_value = 0.5;
  report.passed = true;
  report.residual_count = 2000;
  report.engine = "c4";
  const std::string text = residual_report_json(report);
  for (const char* needle :
       {"SYN-1", "0.03125", "0.5", "true", "2000", "c4"}) {
    CHECK(text.find(needle) != std::string::npos);
  }
}

TEST_CASE("gamma posterior JSON round-trips exactly") {
  const GammaPosterior p = make_gamma_posterior();
  const std::string text = gamma_posterior_json(p);
  CHECK(posterior_kind(text) == "gamma");
  const GammaPosterior q = parse_gamma_posterior(text);
  CHECK(q.a_u == p.a_u);
  CHECK(q.b_u == p.b_u);
  CHECK(q.a_v == p.a_v);
  CHECK(q.b_v == p.b_v);
}

TEST_CASE("gaussian posterior JSON round-trips exactly") {
  GaussianPosterior p;
  p.mu = {-0.5, 0.25, 1.0 / 3.0};
  p.sigma2 = {1.0, 0.5, 0.0625};
  const std::string text = gaussian_posterior_json(p);
  CHECK(posterior_kind(text) == "gaussian");
  const GaussianPosterior q = parse_gaussian_posterior(text);
  CHECK(q.mu == p.mu);
  CHECK(q.sigma2 == p.sigma2);
}

TEST_CASE("trajectories JSON round-trips exactly") {
  Trajectories t;
  t.count = 2;
  t.length = 3;
  t.kind = "logn";
  t.values = {0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
  t.v_values = {1.0, 2.0, 3.0, 4.0};
  const std::string text = trajectories_json(t);
  CHECK(posterior_kind(text) == "trajectories");
  const Trajectories u = parse_trajectories(text);
  CHECK(u.count == t.count);
  CHECK(u.length == t.length);
  CHECK(u.kind == t.kind);
  CHECK(u.values == t.values);
  CHECK(u.v_values == t.v_values);
}

TEST_CASE("posterior parsers reject malformed snapshots") {
  CHECK_THROWS_AS(parse_gamma_posterior("not json"), input_error);
  CHECK_THROWS_AS(parse_gamma_posterior("{\"kind\": \"gamma\"}"), input_error);
  CHECK_THROWS_AS(
      parse_gamma_posterior(gaussian_posterior_json(GaussianPosterior{})),
      input_error);
  CHECK_THROWS_AS(parse_trajectories("{\"kind\": \"gamma\"}"), input_error);
  CHECK_THROWS_AS(posterior_kind("[1,2,3]"), input_error);
  CHECK_THROWS_AS(posterior_kind("{}"), input_error);
}

TEST_CASE("dataset sidecar round-trips simulated data") {
  Rng sim_rng(321);
  const SyntheticDataset sim =
      simulate_gamchain(GamChainParams{2.0}, 50, 1.0, sim_rng);
  SyntheticDataset dataset;
  dataset.series = sim.series;
  dataset.series.instrument_id = "SYN-GAM";
  dataset.series.period = "1m";
  dataset.latents = sim.latents;
  dataset.model = "gam";
  dataset.gam_params = GamChainParams{2.0};
  dataset.seed = 321;

  const std::string text = dataset_sidecar_json(dataset);
  const SyntheticDataset back = parse_dataset_sidecar(text);
  CHECK(back.model == "gam");
  CHECK(back.seed == 321);
  CHECK(back.gam_params.shape_a == 2.0);
  CHECK(back.series.instrument_id == "SYN-GAM");
  CHECK(back.series.period == "1m");
  CHECK(back.series.returns == dataset.series.returns);
  CHECK(back.latents.u == dataset.latents.u);
  CHECK(back.latents.v == dataset.latents.v);
  CHECK_THROWS_AS(parse_dataset_sidecar("{\"model\": 7}"), input_error);
}

TEST_CASE("bars CSV from returns is ingestible and inverts to the returns") {
  ReturnSeries series;
  series.instrument_id = "SYN";
  series.returns = {0.01, -0.02, 0.003, 0.5, -0.4};
  const std::string csv = bars_csv_from_returns(series, 100.0, 0, 60000);
  CHECK(csv.rfind("timestamp,close,volume\n", 0) == 0);

  const auto path =
      std::filesystem::temp_directory_path() / "gamchain_test_bars.csv";
  write_text_file(path, csv);
  const std::vector<BarRecord> bars = load_bars(path);
  REQUIRE(bars.size() == series.returns.size() + 1);
  CHECK(bars[0].close == doctest::Approx(100.0));
  CHECK(bars[1].timestamp - bars[0].timestamp == 60000);
  const ReturnSeries back = to_returns(bars, "SYN");
  REQUIRE(back.returns.size() == series.returns.size());
  for (std::size_t i = 0; i < back.returns.size(); ++i) {
    CHECK(back.returns[i] ==
          doctest::Approx(series.returns[i]).epsilon(1e-9));
  }
  std::filesystem::remove(path);
}

TEST_CASE("bars CSV guards against overflowing cumulative returns") {
  ReturnSeries series;
  series.returns = std::vector<double>(3, 500.0);
  CHECK_THROWS_AS(bars_csv_from_returns(series), numeric_error);
}

TEST_CASE("bench reports serialize to JSON and CSV") {
  std::vector<BenchReport> reports(2);
  reports[0].engine = "c3";
  reports[0].sequence_length = 1000;
  reports[0].iterations = 10;
  reports[0].estep_seconds = 0.5;
  reports[0].mstep_seconds = 0.25;
  reports[0].total_seconds = 0.75;
  reports[1].engine = "c2";
  reports[1].sequence_length = 10000;
  reports[1].iterations = 10;
  reports[1].particles = 2;
  reports[1].total_seconds = 1.5;

  const std::string json = bench_reports_json(reports);
  CHECK(json.find("\"c3\"") != std::string::npos);
  CHECK(json.find("10000") != std::string::npos);

  const std::string csv = bench_reports_csv(reports);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "engine,sequence_length,particles,iterations,estep_seconds,"
        "mstep_seconds,total_seconds");
  std::string row;
  std::getline(lines, row);
  CHECK(row.rfind("c3,1000,0,10,", 0) == 0);
  std::getline(lines, row);
  CHECK(row.rfind("c2,10000,2,10,", 0) == 0);
}

TEST_CASE("timing records serialize to CSV") {
  std::vector<FunctionTimingRecord> records(2);
  records[0].function_name = "add";
  records[0].mean_eval_time = 1.5e-9;
  records[0].sample_count = 1000000;
  records[1].function_name = "digamma";
  records[1].mean_eval_time = 2e-8;
  records[1].sample_count = 1000000;
  const std::string csv = timing_records_csv(records);
  CHECK(csv.find("function,mean_eval_seconds,sample_count") !=
        std::string::npos);
  CHECK(csv.find("add,") != std::string::npos);
  CHECK(csv.find("digamma,") != std::string::npos);
}

TEST_CASE("qq CSV pairs sorted residuals with normal quantiles") {
  const std::vector<double> residuals = {1.0, -1.0, 0.0};
  const std::string csv = qq_csv(residuals);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "theoretical,empirical");
  // Rows are sorted by the empirical value; the middle theoretical quantile
  // is Phi^-1(0.5) = 0 and empirical values appear in ascending order.
  std::vector<std::string> rows;
  while (std::getline(lines, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].find(",-1") != std::string::npos);
  CHECK(rows[1] == "0,0");
  CHECK(rows[2].find(",1") != std::string::npos);
}

TEST_CASE("moments CSV lists one row per shape") {
  std::vector<MomentRow> rows(2);
  rows[0] = {1.0, 3.289868133696453, 4.2};
  rows[1] = {2.0, 1.2898681336964528, 3.9};
  const std::string csv = moments_csv(rows);
  CHECK(csv.rfind("a,variance,kurtosis\n", 0) == 0);
  CHECK(csv.find("\n1,") != std::string::npos);
  CHECK(csv.find("4.2") != std::string::npos);
  CHECK(csv.find("\n2,") != std::string::npos);
}

TEST_CASE("text file round-trip") {
  const auto path =
      std::filesystem::temp_directory_path() / "gamchain_test_text.txt";
  const std::string content = "line1\nline2\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_text_file(path), input_error);
}
