#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace urbanhealth {

struct StopRecord {
  std::string device_id;
  std::string tract_id;
  double lon = 0.0;
  double lat = 0.0;
  std::int64_t arrival_utc = 0;  // epoch seconds
  double dwell_min = 0.0;
  std::string poi_id;  // empty when the stop is not at a POI
};

struct PoiRecord {
  std::string poi_id;
  std::string tract_id;
  std::string naics;  // 2-6 decimal digits
  double lon = 0.0;
  double lat = 0.0;
};

struct TripRecord {
  std::string device_id;
  std::string home_tract;  // resolved from detected homes during assembly
  double duration_min = 0.0;
  double distance_km = 0.0;
  std::vector<std::pair<double, double>> path;  // lon/lat, non-empty
  std::string origin_tract;
  std::string dest_tract;
};

// Ordered category -> NAICS prefix lists; the first matching prefix wins.
class NaicsCategoryMap {
 public:
  static NaicsCategoryMap default_map();
  // lines of "category=prefix[,prefix...]", '#' comments
  static NaicsCategoryMap load(const std::string& path);

  NaicsCategoryMap(std::vector<std::pair<std::string, std::vector<std::string>>> categories);

  std::optional<std::string> category_of(const std::string& naics) const;
  const std::vector<std::pair<std::string, std::vector<std::string>>>& categories() const {
    return categories_;
  }

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> categories_;
};

// visitation/POI categories, fixed order used in the feature columns
inline const std::vector<std::string> kPoiCategories = {"grocery", "health", "restaurant", "rec"};

// "YYYY-MM-DDTHH:MM:SSZ" <-> epoch seconds
std::int64_t parse_utc_timestamp(const std::string& text);
std::string format_utc_timestamp(std::int64_t epoch_seconds);

}  // namespace urbanhealth
