#include "plc/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "plc/errors.hpp"

namespace plc {

std::vector<double> read_value_column(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot open input file: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0') {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw ArgumentError("malformed numeric line in " + path + ": '" + line + "'");
    }
    first = false;
    values.push_back(v);
  }
  if (values.empty()) throw ArgumentError("no numeric values in " + path);
  return values;
}

void write_scan_csv(const WindowScanResult& result, std::ostream& os) {
  os << "center,lambda,exceeds\n";
  for (std::size_t i = 0; i < result.centers.size(); ++i)
    os << result.centers[i] << ',' << result.lambdas[i] << ','
       << (result.lambdas[i] > result.critical_value ? 1 : 0) << '\n';
}

}  // namespace plc
