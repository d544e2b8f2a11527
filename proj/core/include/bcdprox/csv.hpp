#pragma once

#include <filesystem>
#include <string>

#include "bcdprox/grid.hpp"

namespace bcdprox {

/// Doubles are serialized with 17 significant digits so a write/read
/// round-trip reproduces every value exactly. Lines end with LF.
std::string format_double(double v);

/// Header `t,<prefix>0,...,<prefix>{d-1}`, one row per sample time.
void write_timeseries_csv(const std::filesystem::path &path, const TimeSeries &series,
                          const std::string &prefix);

TimeSeries read_timeseries_csv(const std::filesystem::path &path);

} // namespace bcdprox
