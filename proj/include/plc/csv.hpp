#pragma once

#include <string>
#include <vector>

#include "plc/changepoint.hpp"

namespace plc {

/// One numeric value per line; a single non-numeric first line is treated as
/// a header and skipped. Blank lines are ignored.
std::vector<double> read_value_column(const std::string& path);

/// Scan output: center,lambda,exceeds rows.
void write_scan_csv(const WindowScanResult& result, std::ostream& os);

}  // namespace plc
