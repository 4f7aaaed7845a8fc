#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "urbanhealth/graph.hpp"
#include "urbanhealth/matrix.hpp"
#include "urbanhealth/records.hpp"

namespace urbanhealth {

// feature columns in fixed table order
inline const std::vector<std::string> kFeatureColumns = {
    "Age",          "Income",       "Minority",         "N(grocery)",
    "N(health)",    "N(restaurant)", "N(rec)",          "Emission",
    "CT_Avg_Time",  "CT_Avg_Trips", "CT_Avg_Distance",  "CT_Avg_ROG",
    "Adj_V(grocery)", "Adj_V(health)", "Adj_V(restaurant)", "Adj_V(rec)",
    "Active_index"};

inline const std::vector<std::string> kDiseases = {"obesity", "diabetes", "cancer",
                                                   "heart_disease"};

enum class CoordMode { planar, geographic };

// equirectangular approximation, kilometers
double geo_distance_km(double lon1, double lat1, double lon2, double lat2);

// Per-tract feature matrix plus 1..4 labels per disease. Rows align with
// TractGraph node indices. col_mean/col_std are filled by standardize().
struct FeatureTable {
  std::vector<std::string> tract_ids;
  std::vector<std::string> columns;
  Matrix values;  // tract_ids.size() x columns.size()
  std::map<std::string, std::vector<int>> labels;
  std::vector<double> col_mean;
  std::vector<double> col_std;
  std::map<std::string, std::size_t> imputed;

  bool standardized() const { return !col_mean.empty(); }
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(std::size_t c) const;
  // reorders/filters feature columns (labels and ids carried over)
  FeatureTable subset_columns(const std::vector<std::string>& names) const;
};

struct AssembleConfig {
  NaicsCategoryMap naics = NaicsCategoryMap::default_map();
  CoordMode coords = CoordMode::geographic;
  std::optional<std::int64_t> window_start;  // default: earliest stop arrival
  std::optional<int> window_weeks;           // default: cover all stops
  bool allow_missing_emission = false;
  double home_dwell_min = 720.0;  // a home stay is longer than 12 hours
};

struct AssemblyReport {
  std::map<std::string, std::size_t> imputed;
  std::size_t devices_total = 0;
  std::size_t devices_with_home = 0;
  std::size_t trips_dropped_no_home = 0;
  std::size_t zero_device_tracts = 0;
  std::int64_t window_start = 0;
  int window_weeks = 1;
};

struct DemographicsRow {
  double age_pct_over65 = 0.0;
  double income = 0.0;
  double minority_pct = 0.0;
};

// Raw per-county inputs as loaded from the CSV bundle.
struct RawCounty {
  std::vector<std::string> tract_ids;  // tracts.csv order
  std::unordered_map<std::string, double> population;
  std::unordered_map<std::string, DemographicsRow> demographics;
  std::unordered_map<std::string, double> emission;
  bool emission_present = true;
  std::unordered_map<std::string, std::array<double, 4>> health;  // kDiseases order
  std::vector<PoiRecord> pois;
  std::vector<StopRecord> stops;
  std::vector<TripRecord> trips;
  std::vector<std::pair<std::string, std::string>> adjacency;
};

RawCounty load_county_dir(const std::string& dir, bool allow_missing_emission = false);

// ---- feature engineering -------------------------------------------------

// device -> home tract; a home needs a stay longer than `min_dwell` minutes,
// the longest such stay wins, ties by earliest arrival then tract id
std::unordered_map<std::string, std::string> detect_home(std::span<const StopRecord> stops,
                                                         double min_dwell = 720.0);

double radius_of_gyration(std::span<const std::pair<double, double>> positions,
                          CoordMode mode);

struct MicroMobilityColumns {
  std::vector<double> avg_time;
  std::vector<double> avg_trips;
  std::vector<double> avg_distance;
  std::vector<double> avg_rog;
  std::size_t zero_device_tracts = 0;
};

// trips must carry resolved home tracts; trips of homeless devices are not
// passed here
MicroMobilityColumns micro_mobility_features(std::span<const TripRecord> trips,
                                             const TractGraph& graph, CoordMode mode);

// (distinct users entering + distinct users leaving) / population; a trip
// that starts and ends in the same tract crosses no boundary and counts as
// neither
std::vector<double> active_index(std::span<const TripRecord> trips, const TractGraph& graph,
                                 const std::unordered_map<std::string, double>& population);

// per-tract counts per category, kPoiCategories order
std::vector<std::vector<double>> poi_density(std::span<const PoiRecord> pois,
                                             const NaicsCategoryMap& map,
                                             const TractGraph& graph);

struct VisitationWindow {
  std::int64_t start = 0;
  int weeks = 1;
};

// weekly POI-category visits by resident devices, averaged over the window
// weeks, divided by home-tract population
std::vector<std::vector<double>> adjusted_visitation(
    std::span<const StopRecord> stops, std::span<const PoiRecord> pois,
    const std::unordered_map<std::string, std::string>& homes, const NaicsCategoryMap& map,
    const std::unordered_map<std::string, double>& population, const TractGraph& graph,
    const VisitationWindow& window);

// linear-interpolation quantile of sorted values, p in [0,1]
double quantile_type7(std::span<const double> sorted_values, double p);

// 1..4 by the 25/50/75% quantiles; boundary ties take the lower class
std::vector<int> quantile_labels(std::span<const double> values);

// z-scores every column in place; zero-variance columns become all zeros
void standardize(FeatureTable& table);

FeatureTable assemble(const RawCounty& county, const TractGraph& graph,
                      const AssembleConfig& config, AssemblyReport* report = nullptr);

// ---- persistence -----------------------------------------------------------

void save_feature_table(const std::string& csv_path, const FeatureTable& table,
                        const AssemblyReport& report);
FeatureTable load_feature_table(const std::string& csv_path);
std::string meta_path_for(const std::string& csv_path);

}  // namespace urbanhealth
