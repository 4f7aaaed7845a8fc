#include "urbanhealth/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

namespace {

std::vector<std::string> split_line(const std::string& line, const std::string& origin,
                                    std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) {
    throw InputError(origin + ":" + std::to_string(lineno) + ": unterminated quote");
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::size_t CsvTable::require_column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError(path + ": missing required column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable table;
  table.path = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && lineno > 1) continue;
    auto fields = split_line(line, origin, lineno);
    if (lineno == 1) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        throw InputError(origin + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(table.header.size()) + " fields, got " +
                         std::to_string(fields.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw InputError(origin + ": missing header row");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  auto emit_row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      const std::string& f = fields[i];
      if (f.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : f) {
          if (ch == '"') out << "\"\"";
          else out << ch;
        }
        out << '"';
      } else {
        out << f;
      }
    }
    out << '\n';
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
  if (!out) throw InputError("failed writing " + path);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& context) {
  double v = parse_double_or_nan(s, context);
  if (std::isnan(v)) throw InputError(context + ": empty numeric field");
  return v;
}

double parse_double_or_nan(const std::string& s, const std::string& context) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
  std::size_t e = s.find_last_not_of(" \t") + 1;
  double v = 0.0;
  auto res = std::from_chars(s.data() + b, s.data() + e, v);
  if (res.ec != std::errc{} || res.ptr != s.data() + e) {
    throw InputError(context + ": not a number: '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& context) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) throw InputError(context + ": empty integer field");
  std::size_t e = s.find_last_not_of(" \t") + 1;
  long long v = 0;
  auto res = std::from_chars(s.data() + b, s.data() + e, v);
  if (res.ec != std::errc{} || res.ptr != s.data() + e) {
    throw InputError(context + ": not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace urbanhealth
