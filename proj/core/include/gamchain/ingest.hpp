// Market-data ingestion: CSV bar files with a fixed header become validated
// bar records, and surviving bars become log-return series.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gamchain/types.hpp"

namespace gamchain {

enum class BarFormat { csv };

// Parses a bar file with header `timestamp,close,volume`. Timestamps must be
// strictly increasing integers and closes strictly positive; violations raise
// input_error citing the row number. An empty file (or header-only file) is
// an error.
std::vector<BarRecord> load_bars(const std::filesystem::path& path,
                                 BarFormat format = BarFormat::csv);

// Drops zero-volume bars first, then takes log close-to-close returns over
// the surviving consecutive pairs. Fewer than 3 surviving bars is an error.
ReturnSeries to_returns(const std::vector<BarRecord>& bars,
                        const std::string& instrument_id = "",
                        const std::string& period = "bar");

}  // namespace gamchain
