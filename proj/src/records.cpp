#include "urbanhealth/records.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

NaicsCategoryMap::NaicsCategoryMap(
    std::vector<std::pair<std::string, std::vector<std::string>>> categories)
    : categories_(std::move(categories)) {
  for (const auto& [name, prefixes] : categories_) {
    for (const auto& p : prefixes) {
      if (p.empty() || !std::all_of(p.begin(), p.end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
        throw InputError("NAICS prefix must be decimal digits: '" + p + "'");
      }
    }
  }
}

NaicsCategoryMap NaicsCategoryMap::default_map() {
  return NaicsCategoryMap({{"grocery", {"4451"}},
                           {"health", {"62"}},
                           {"restaurant", {"7225"}},
                           {"rec", {"7139"}}});
}

NaicsCategoryMap NaicsCategoryMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open NAICS map " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> cats;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected category=prefixes");
    }
    std::string name = line.substr(b, eq - b);
    name.erase(name.find_last_not_of(" \t") + 1);
    std::vector<std::string> prefixes;
    std::stringstream rest(line.substr(eq + 1));
    std::string tok;
    while (std::getline(rest, tok, ',')) {
      std::size_t s = tok.find_first_not_of(" \t");
      if (s == std::string::npos) continue;
      std::size_t e = tok.find_last_not_of(" \t") + 1;
      prefixes.push_back(tok.substr(s, e - s));
    }
    cats.emplace_back(std::move(name), std::move(prefixes));
  }
  if (cats.empty()) throw InputError(path + ": empty NAICS map");
  return NaicsCategoryMap(std::move(cats));
}

std::optional<std::string> NaicsCategoryMap::category_of(const std::string& naics) const {
  for (const auto& [name, prefixes] : categories_) {
    for (const auto& p : prefixes) {
      if (naics.size() >= p.size() && naics.compare(0, p.size(), p) == 0) return name;
    }
  }
  return std::nullopt;
}

namespace {

// days since 1970-01-01 for a proleptic Gregorian date
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

int parse_fixed_int(const std::string& s, std::size_t pos, std::size_t len,
                    const std::string& what) {
  int v = 0;
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (res.ec != std::errc{} || res.ptr != s.data() + pos + len) {
    throw InputError("bad timestamp " + what + " in '" + s + "'");
  }
  return v;
}

}  // namespace

std::int64_t parse_utc_timestamp(const std::string& text) {
  // strict YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    throw InputError("timestamp must look like 2020-02-01T08:30:00Z, got '" + text + "'");
  }
  int y = parse_fixed_int(text, 0, 4, "year");
  int mo = parse_fixed_int(text, 5, 2, "month");
  int d = parse_fixed_int(text, 8, 2, "day");
  int h = parse_fixed_int(text, 11, 2, "hour");
  int mi = parse_fixed_int(text, 14, 2, "minute");
  int s = parse_fixed_int(text, 17, 2, "second");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) {
    throw InputError("timestamp field out of range in '" + text + "'");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_utc_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t secs = epoch_seconds % 86400;
  if (secs < 0) {
    secs += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(secs / 3600), static_cast<int>((secs % 3600) / 60),
                static_cast<int>(secs % 60));
  return buf;
}

}  // namespace urbanhealth
