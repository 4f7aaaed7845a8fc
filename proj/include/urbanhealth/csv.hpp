#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace urbanhealth {

// Minimal CSV support: comma separator, double-quote quoting, header row
// required. Numbers are rendered with shortest round-trip formatting so
// emitted files are byte-stable across runs.
struct CsvTable {
  std::string path;  // for error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t require_column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);
double parse_double(const std::string& s, const std::string& context);
// empty cell -> NaN (missing value)
double parse_double_or_nan(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

}  // namespace urbanhealth
