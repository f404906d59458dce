#pragma once

#include <string>
#include <vector>

namespace hslra {

// Shortest decimal string that parses back to exactly x. Keeps CSV and JSON
// output byte-stable across runs.
std::string fmt_double(double x);

// One sample per line, optional single header line, optional extra columns.
// column selects by zero-based index ("0", "2", ...) or by header name.
std::vector<double> read_series_csv(const std::string& path, const std::string& column = "0");

// Column-oriented writer; all columns must share a length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_text(const std::string& path, const std::string& text);

std::string read_text(const std::string& path);

} // namespace hslra
