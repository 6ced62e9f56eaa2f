#include "gamchain/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "gamchain/errors.hpp"

namespace gamchain {

namespace {

std::string row_context(const std::filesystem::path& path, std::size_t row) {
  return path.string() + " row " + std::to_string(row) + ": ";
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Splits into exactly three comma-separated fields.
bool split3(std::string_view line, std::string_view out[3]) {
  std::size_t first = line.find(',');
  if (first == std::string_view::npos) return false;
  std::size_t second = line.find(',', first + 1);
  if (second == std::string_view::npos) return false;
  if (line.find(',', second + 1) != std::string_view::npos) return false;
  out[0] = line.substr(0, first);
  out[1] = line.substr(first + 1, second - first - 1);
  out[2] = line.substr(second + 1);
  return true;
}

bool parse_int(std::string_view s, std::int64_t& value) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool parse_double(std::string_view s, double& value) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end && !s.empty() && std::isfinite(value);
}

}  // namespace

std::vector<BarRecord> load_bars(const std::filesystem::path& path, BarFormat format) {
  if (format != BarFormat::csv) throw config_error("load_bars: unsupported format");
  std::ifstream file(path);
  if (!file) throw input_error("load_bars: cannot open " + path.string());

  std::string line;
  if (!std::getline(file, line)) {
    throw input_error("load_bars: " + path.string() + " is empty");
  }
  if (strip_cr(line) != "timestamp,close,volume") {
    throw input_error(row_context(path, 1) +
                      "expected header 'timestamp,close,volume'");
  }

  std::vector<BarRecord> bars;
  std::size_t row = 1;
  while (std::getline(file, line)) {
    ++row;
    const std::string_view body = strip_cr(line);
    if (body.empty()) continue;
    std::string_view fields[3];
    if (!split3(body, fields)) {
      throw input_error(row_context(path, row) + "expected 3 comma-separated fields");
    }
    BarRecord bar;
    if (!parse_int(fields[0], bar.timestamp)) {
      throw input_error(row_context(path, row) + "bad timestamp '" +
                        std::string(fields[0]) + "'");
    }
    if (!parse_double(fields[1], bar.close)) {
      throw input_error(row_context(path, row) + "bad close '" +
                        std::string(fields[1]) + "'");
    }
    if (!parse_double(fields[2], bar.volume)) {
      throw input_error(row_context(path, row) + "bad volume '" +
                        std::string(fields[2]) + "'");
    }
    if (bar.close <= 0.0) {
      throw input_error(row_context(path, row) + "close must be positive");
    }
    if (bar.volume < 0.0) {
      throw input_error(row_context(path, row) + "volume must be non-negative");
    }
    if (!bars.empty() && bar.timestamp <= bars.back().timestamp) {
      throw input_error(row_context(path, row) +
                        "timestamps must be strictly increasing");
    }
    bars.push_back(bar);
  }
  if (bars.empty()) {
    throw input_error("load_bars: " + path.string() + " has no data rows");
  }
  return bars;
}

ReturnSeries to_returns(const std::vector<BarRecord>& bars,
                        const std::string& instrument_id, const std::string& period) {
  std::vector<const BarRecord*> surviving;
  surviving.reserve(bars.size());
  for (const auto& bar : bars) {
    if (bar.volume > 0.0) surviving.push_back(&bar);
  }
  if (surviving.size() < 3) {
    throw input_error("to_returns: needs at least 3 bars with positive volume, got " +
                      std::to_string(surviving.size()));
  }
  ReturnSeries series;
  series.instrument_id = instrument_id;
  series.period = period;
  series.returns.resize(surviving.size() - 1);
  for (std::size_t i = 0; i + 1 < surviving.size(); ++i) {
    series.returns[i] = std::log(surviving[i + 1]->close / surviving[i]->close);
  }
  series.validate();
  return series;
}

}  // namespace gamchain
