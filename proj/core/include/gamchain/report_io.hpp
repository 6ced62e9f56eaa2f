// Report serialization: JSON for structured reports and posterior snapshots,
// CSV for tabular outputs. Serialization is deterministic for a given build
// (shortest round-trip float formatting, fixed field order).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gamchain/mc.hpp"
#include "gamchain/timing.hpp"
#include "gamchain/types.hpp"

namespace gamchain {

// include_timings=false writes the wall-time fields as 0 so that repeated
// runs with the same seed produce byte-identical reports.
std::string fit_report_json(const FitReport& report, bool include_timings = false);

std::string residual_report_json(const ResidualReport& report);

std::string bench_reports_json(const std::vector<BenchReport>& reports);
std::string bench_reports_csv(const std::vector<BenchReport>& reports);

std::string timing_records_csv(const std::vector<FunctionTimingRecord>& records);

// Posterior snapshots carry a "kind" discriminator: "gamma", "gaussian", or
// "trajectories". parse_* functions throw input_error on malformed input.
std::string gamma_posterior_json(const GammaPosterior& posterior);
GammaPosterior parse_gamma_posterior(const std::string& text);
std::string gaussian_posterior_json(const GaussianPosterior& posterior);
GaussianPosterior parse_gaussian_posterior(const std::string& text);
std::string trajectories_json(const Trajectories& trajectories);
Trajectories parse_trajectories(const std::string& text);

// "gamma" | "gaussian" | "trajectories", from the snapshot's kind field.
std::string posterior_kind(const std::string& text);

// Synthetic dataset sidecar: parameters, seed, returns, and latents.
std::string dataset_sidecar_json(const SyntheticDataset& dataset);
SyntheticDataset parse_dataset_sidecar(const std::string& text);

// Bars equivalent to the given returns (close_0 = base_close, closes compound
// by e^r, unit volume, fixed timestamp spacing); loadable by load_bars.
std::string bars_csv_from_returns(const ReturnSeries& series,
                                  double base_close = 100.0,
                                  std::int64_t t0 = 0, std::int64_t dt = 60000);

// theoretical,empirical quantile pairs of the residual sample against N(0,1).
std::string qq_csv(const std::vector<double>& residuals);

// a,variance,kurtosis rows.
struct MomentRow {
  double a = 0.0;
  double variance = 0.0;
  double kurtosis = 0.0;
};
std::string moments_csv(const std::vector<MomentRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gamchain
