#include "urbanhealth/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "urbanhealth/csv.hpp"
#include "urbanhealth/errors.hpp"

namespace urbanhealth {

namespace {
constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kDegToRad = 0.017453292519943295;

std::string offender_list(const std::set<std::string>& ids) {
  std::string out;
  std::size_t shown = 0;
  for (const auto& id : ids) {
    if (shown++ == 10) {
      out += ", ... (" + std::to_string(ids.size()) + " total)";
      break;
    }
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double geo_distance_km(double lon1, double lat1, double lon2, double lat2) {
  const double mean_lat = 0.5 * (lat1 + lat2) * kDegToRad;
  const double dx = (lon2 - lon1) * kDegToRad * std::cos(mean_lat) * kEarthRadiusKm;
  const double dy = (lat2 - lat1) * kDegToRad * kEarthRadiusKm;
  return std::sqrt(dx * dx + dy * dy);
}

std::size_t FeatureTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InputError("feature table has no column '" + name + "'");
}

std::vector<double> FeatureTable::column(std::size_t c) const {
  std::vector<double> out(values.rows());
  for (std::size_t r = 0; r < values.rows(); ++r) out[r] = values(r, c);
  return out;
}

FeatureTable FeatureTable::subset_columns(const std::vector<std::string>& names) const {
  FeatureTable out;
  out.tract_ids = tract_ids;
  out.columns = names;
  out.labels = labels;
  out.values = Matrix(values.rows(), names.size());
  if (!col_mean.empty()) {
    out.col_mean.resize(names.size());
    out.col_std.resize(names.size());
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    std::size_t src = column_index(names[j]);
    for (std::size_t r = 0; r < values.rows(); ++r) out.values(r, j) = values(r, src);
    if (!col_mean.empty()) {
      out.col_mean[j] = col_mean[src];
      out.col_std[j] = col_std[src];
    }
  }
  return out;
}

// ---- loading ---------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> parse_path(const std::string& text,
                                                  const std::string& context) {
  std::vector<std::pair<double, double>> points;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    std::size_t b = part.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t sp = part.find(' ', b);
    if (sp == std::string::npos) throw InputError(context + ": bad path point '" + part + "'");
    double lon = parse_double(part.substr(b, sp - b), context);
    double lat = parse_double(part.substr(sp + 1), context);
    points.emplace_back(lon, lat);
  }
  if (points.empty()) throw InputError(context + ": empty trip path");
  return points;
}

}  // namespace

RawCounty load_county_dir(const std::string& dir, bool allow_missing_emission) {
  namespace fs = std::filesystem;
  RawCounty county;

  CsvTable tracts = read_csv((fs::path(dir) / "tracts.csv").string());
  {
    std::size_t cid = tracts.require_column("tract_id");
    std::size_t cpop = tracts.require_column("population");
    for (const auto& row : tracts.rows) {
      county.tract_ids.push_back(row[cid]);
      county.population[row[cid]] = parse_double(row[cpop], tracts.path);
    }
  }

  CsvTable demo = read_csv((fs::path(dir) / "demographics.csv").string());
  {
    std::size_t cid = demo.require_column("tract_id");
    std::size_t cage = demo.require_column("age_pct_over65");
    std::size_t cinc = demo.require_column("income");
    std::size_t cmin = demo.require_column("minority_pct");
    for (const auto& row : demo.rows) {
      DemographicsRow d;
      d.age_pct_over65 = parse_double_or_nan(row[cage], demo.path);
      d.income = parse_double_or_nan(row[cinc], demo.path);
      d.minority_pct = parse_double_or_nan(row[cmin], demo.path);
      county.demographics[row[cid]] = d;
    }
  }

  fs::path emission_path = fs::path(dir) / "emission.csv";
  if (fs::exists(emission_path)) {
    CsvTable em = read_csv(emission_path.string());
    std::size_t cid = em.require_column("tract_id");
    std::size_t cpm = em.require_column("pm25");
    for (const auto& row : em.rows) {
      county.emission[row[cid]] = parse_double_or_nan(row[cpm], em.path);
    }
  } else if (allow_missing_emission) {
    county.emission_present = false;
  } else {
    throw InputError("missing " + emission_path.string() +
                     " (pass allow_missing_emission to fall back to an imputed column)");
  }

  CsvTable health = read_csv((fs::path(dir) / "health.csv").string());
  {
    std::size_t cid = health.require_column("tract_id");
    std::array<std::size_t, 4> cols{};
    for (std::size_t d = 0; d < kDiseases.size(); ++d) {
      cols[d] = health.require_column(kDiseases[d]);
    }
    for (const auto& row : health.rows) {
      std::array<double, 4> vals{};
      for (std::size_t d = 0; d < kDiseases.size(); ++d) {
        vals[d] = parse_double(row[cols[d]], health.path);
      }
      county.health[row[cid]] = vals;
    }
  }

  CsvTable pois = read_csv((fs::path(dir) / "pois.csv").string());
  {
    std::size_t cpoi = pois.require_column("poi_id");
    std::size_t cid = pois.require_column("tract_id");
    std::size_t cnaics = pois.require_column("naics");
    std::size_t clon = pois.require_column("lon");
    std::size_t clat = pois.require_column("lat");
    for (const auto& row : pois.rows) {
      county.pois.push_back({row[cpoi], row[cid], row[cnaics],
                             parse_double(row[clon], pois.path),
                             parse_double(row[clat], pois.path)});
    }
  }

  CsvTable stops = read_csv((fs::path(dir) / "stops.csv").string());
  {
    std::size_t cdev = stops.require_column("device_id");
    std::size_t cid = stops.require_column("tract_id");
    std::size_t clon = stops.require_column("lon");
    std::size_t clat = stops.require_column("lat");
    std::size_t carr = stops.require_column("arrival_utc");
    std::size_t cdwell = stops.require_column("dwell_min");
    std::size_t cpoi = stops.require_column("poi_id");
    for (const auto& row : stops.rows) {
      StopRecord s;
      s.device_id = row[cdev];
      s.tract_id = row[cid];
      s.lon = parse_double(row[clon], stops.path);
      s.lat = parse_double(row[clat], stops.path);
      s.arrival_utc = parse_utc_timestamp(row[carr]);
      s.dwell_min = parse_double(row[cdwell], stops.path);
      if (s.dwell_min < 0) throw InputError(stops.path + ": negative dwell_min");
      s.poi_id = row[cpoi];
      county.stops.push_back(std::move(s));
    }
  }

  CsvTable trips = read_csv((fs::path(dir) / "trips.csv").string());
  {
    std::size_t cdev = trips.require_column("device_id");
    std::size_t corig = trips.require_column("origin_tract");
    std::size_t cdest = trips.require_column("dest_tract");
    std::size_t cdur = trips.require_column("duration_min");
    std::size_t cdist = trips.require_column("distance_km");
    std::size_t cpath = trips.require_column("path");
    for (const auto& row : trips.rows) {
      TripRecord t;
      t.device_id = row[cdev];
      t.origin_tract = row[corig];
      t.dest_tract = row[cdest];
      t.duration_min = parse_double(row[cdur], trips.path);
      t.distance_km = parse_double(row[cdist], trips.path);
      if (t.duration_min < 0 || t.distance_km < 0) {
        throw InputError(trips.path + ": negative duration or distance");
      }
      t.path = parse_path(row[cpath], trips.path);
      county.trips.push_back(std::move(t));
    }
  }

  fs::path adj = fs::path(dir) / "adjacency.csv";
  if (fs::exists(adj)) county.adjacency = load_edge_list_csv(adj.string());

  return county;
}

// ---- feature engineering ----------------------------------------------------

std::unordered_map<std::string, std::string> detect_home(std::span<const StopRecord> stops,
                                                         double min_dwell) {
  struct Best {
    double dwell = -1.0;
    std::int64_t arrival = 0;
    std::string tract;
  };
  std::unordered_map<std::string, Best> best;
  for (const StopRecord& s : stops) {
    if (s.dwell_min <= min_dwell) continue;
    Best& b = best[s.device_id];
    bool better = s.dwell_min > b.dwell ||
                  (s.dwell_min == b.dwell && s.arrival_utc < b.arrival) ||
                  (s.dwell_min == b.dwell && s.arrival_utc == b.arrival && s.tract_id < b.tract);
    if (better) b = {s.dwell_min, s.arrival_utc, s.tract_id};
  }
  std::unordered_map<std::string, std::string> homes;
  for (auto& [device, b] : best) homes.emplace(device, std::move(b.tract));
  return homes;
}

double radius_of_gyration(std::span<const std::pair<double, double>> positions,
                          CoordMode mode) {
  if (positions.empty()) throw InputError("radius_of_gyration: no positions");
  double cx = 0.0, cy = 0.0;
  for (const auto& [x, y] : positions) {
    cx += x;
    cy += y;
  }
  cx /= static_cast<double>(positions.size());
  cy /= static_cast<double>(positions.size());
  double acc = 0.0;
  for (const auto& [x, y] : positions) {
    double d = mode == CoordMode::planar
                   ? std::hypot(x - cx, y - cy)
                   : geo_distance_km(x, y, cx, cy);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(positions.size()));
}

MicroMobilityColumns micro_mobility_features(std::span<const TripRecord> trips,
                                             const TractGraph& graph, CoordMode mode) {
  struct DeviceAgg {
    std::size_t tract = 0;
    double total_duration = 0.0;
    double total_distance = 0.0;
    std::size_t trip_count = 0;
    std::vector<std::pair<double, double>> positions;
  };
  std::unordered_map<std::string, DeviceAgg> devices;
  for (const TripRecord& t : trips) {
    if (t.home_tract.empty()) {
      throw InputError("micro_mobility_features: trip without resolved home tract");
    }
    DeviceAgg& d = devices[t.device_id];
    d.tract = graph.require_index(t.home_tract);
    d.total_duration += t.duration_min;
    d.total_distance += t.distance_km;
    d.trip_count += 1;
    d.positions.insert(d.positions.end(), t.path.begin(), t.path.end());
  }

  const std::size_t n = graph.node_count();
  std::vector<double> time(n, 0.0), count(n, 0.0), dist(n, 0.0), rog(n, 0.0);
  std::vector<std::size_t> residents(n, 0);
  for (const auto& [id, d] : devices) {
    time[d.tract] += d.total_duration / static_cast<double>(d.trip_count);
    count[d.tract] += static_cast<double>(d.trip_count);
    dist[d.tract] += d.total_distance / static_cast<double>(d.trip_count);
    rog[d.tract] += radius_of_gyration(d.positions, mode);
    residents[d.tract] += 1;
  }
  MicroMobilityColumns out;
  out.avg_time.resize(n);
  out.avg_trips.resize(n);
  out.avg_distance.resize(n);
  out.avg_rog.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (residents[i] == 0) {
      out.zero_device_tracts += 1;
      continue;
    }
    const double r = static_cast<double>(residents[i]);
    out.avg_time[i] = time[i] / r;
    out.avg_trips[i] = count[i] / r;
    out.avg_distance[i] = dist[i] / r;
    out.avg_rog[i] = rog[i] / r;
  }
  return out;
}

std::vector<double> active_index(std::span<const TripRecord> trips, const TractGraph& graph,
                                 const std::unordered_map<std::string, double>& population) {
  const std::size_t n = graph.node_count();
  std::vector<std::set<std::string>> entering(n), leaving(n);
  for (const TripRecord& t : trips) {
    std::size_t o = graph.require_index(t.origin_tract);
    std::size_t d = graph.require_index(t.dest_tract);
    if (o == d) continue;
    entering[d].insert(t.device_id);
    leaving[o].insert(t.device_id);
  }
  std::vector<double> ai(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double flows = static_cast<double>(entering[i].size() + leaving[i].size());
    auto pop = population.find(graph.node_id(i));
    const double p = pop == population.end() ? 0.0 : pop->second;
    if (p <= 0.0) {
      if (flows > 0.0) {
        throw InputError("active_index: tract " + graph.node_id(i) +
                         " has flows but zero population");
      }
      ai[i] = 0.0;
    } else {
      ai[i] = flows / p;
    }
  }
  return ai;
}

std::vector<std::vector<double>> poi_density(std::span<const PoiRecord> pois,
                                             const NaicsCategoryMap& map,
                                             const TractGraph& graph) {
  std::vector<std::vector<double>> counts(kPoiCategories.size(),
                                          std::vector<double>(graph.node_count(), 0.0));
  for (const PoiRecord& p : pois) {
    auto cat = map.category_of(p.naics);
    if (!cat) continue;
    std::size_t t = graph.require_index(p.tract_id);
    for (std::size_t c = 0; c < kPoiCategories.size(); ++c) {
      if (kPoiCategories[c] == *cat) {
        counts[c][t] += 1.0;
        break;
      }
    }
  }
  return counts;
}

std::vector<std::vector<double>> adjusted_visitation(
    std::span<const StopRecord> stops, std::span<const PoiRecord> pois,
    const std::unordered_map<std::string, std::string>& homes, const NaicsCategoryMap& map,
    const std::unordered_map<std::string, double>& population, const TractGraph& graph,
    const VisitationWindow& window) {
  if (window.weeks < 1) throw InputError("adjusted_visitation: window needs >= 1 week");

  std::unordered_map<std::string, std::size_t> poi_category;  // poi_id -> category idx
  for (const PoiRecord& p : pois) {
    auto cat = map.category_of(p.naics);
    if (!cat) continue;
    for (std::size_t c = 0; c < kPoiCategories.size(); ++c) {
      if (kPoiCategories[c] == *cat) {
        poi_category[p.poi_id] = c;
        break;
      }
    }
  }

  const std::size_t n = graph.node_count();
  std::vector<std::vector<double>> visits(kPoiCategories.size(), std::vector<double>(n, 0.0));
  const std::int64_t span_seconds = static_cast<std::int64_t>(window.weeks) * 7 * 86400;
  for (const StopRecord& s : stops) {
    if (s.poi_id.empty()) continue;
    auto home = homes.find(s.device_id);
    if (home == homes.end()) continue;  // not a resident anywhere
    if (s.arrival_utc < window.start || s.arrival_utc >= window.start + span_seconds) continue;
    auto cat = poi_category.find(s.poi_id);
    if (cat == poi_category.end()) {
      bool known = std::any_of(pois.begin(), pois.end(),
                               [&](const PoiRecord& p) { return p.poi_id == s.poi_id; });
      if (!known) throw InputError("stop references unknown poi_id '" + s.poi_id + "'");
      continue;  // known POI outside the mapped categories
    }
    std::size_t t = graph.require_index(home->second);
    visits[cat->second][t] += 1.0;
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto pop = population.find(graph.node_id(i));
    const double p = pop == population.end() ? 0.0 : pop->second;
    if (p <= 0.0) {
      throw InputError("adjusted_visitation: tract " + graph.node_id(i) +
                       " has zero population");
    }
    for (auto& col : visits) col[i] /= static_cast<double>(window.weeks) * p;
  }
  return visits;
}

double quantile_type7(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) throw InputError("quantile of empty list");
  const double h = (static_cast<double>(sorted_values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<int> quantile_labels(std::span<const double> values) {
  if (values.size() < 4) throw InputError("quantile_labels needs at least 4 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double q25 = quantile_type7(sorted, 0.25);
  const double q50 = quantile_type7(sorted, 0.50);
  const double q75 = quantile_type7(sorted, 0.75);
  std::vector<int> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    labels[i] = v <= q25 ? 1 : v <= q50 ? 2 : v <= q75 ? 3 : 4;
  }
  return labels;
}

void standardize(FeatureTable& table) {
  const std::size_t n = table.values.rows();
  const std::size_t d = table.values.cols();
  table.col_mean.assign(d, 0.0);
  table.col_std.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += table.values(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double dv = table.values(r, c) - mean;
      var += dv * dv;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    table.col_mean[c] = mean;
    table.col_std[c] = sd;
    for (std::size_t r = 0; r < n; ++r) {
      table.values(r, c) = sd > 1e-12 ? (table.values(r, c) - mean) / sd : 0.0;
    }
  }
}

FeatureTable assemble(const RawCounty& county, const TractGraph& graph,
                      const AssembleConfig& config, AssemblyReport* report) {
  const std::size_t n = graph.node_count();

  // health tracts must be graph nodes, and every node needs labels
  std::set<std::string> unknown, unlabeled;
  for (const auto& [id, vals] : county.health) {
    if (!graph.index_of(id)) unknown.insert(id);
  }
  if (!unknown.empty()) {
    throw InputError("health.csv tracts not in the graph: " + offender_list(unknown));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!county.health.count(graph.node_id(i))) unlabeled.insert(graph.node_id(i));
  }
  if (!unlabeled.empty()) {
    throw InputError("graph tracts missing from health.csv: " + offender_list(unlabeled));
  }
  for (const auto& [id, d] : county.demographics) {
    if (!graph.index_of(id)) unknown.insert(id);
  }
  for (const auto& p : county.pois) {
    if (!graph.index_of(p.tract_id)) unknown.insert(p.tract_id);
  }
  for (const auto& s : county.stops) {
    if (!graph.index_of(s.tract_id)) unknown.insert(s.tract_id);
  }
  for (const auto& t : county.trips) {
    if (!graph.index_of(t.origin_tract)) unknown.insert(t.origin_tract);
    if (!graph.index_of(t.dest_tract)) unknown.insert(t.dest_tract);
  }
  if (!unknown.empty()) {
    throw InputError("input rows reference tracts not in the graph: " +
                     offender_list(unknown));
  }

  AssemblyReport rep;

  auto homes = detect_home(county.stops, config.home_dwell_min);
  std::set<std::string> all_devices;
  for (const auto& s : county.stops) all_devices.insert(s.device_id);
  for (const auto& t : county.trips) all_devices.insert(t.device_id);
  rep.devices_total = all_devices.size();
  rep.devices_with_home = homes.size();

  std::vector<TripRecord> resident_trips;
  resident_trips.reserve(county.trips.size());
  for (TripRecord t : county.trips) {
    auto h = homes.find(t.device_id);
    if (h == homes.end()) {
      rep.trips_dropped_no_home += 1;
      continue;
    }
    t.home_tract = h->second;
    resident_trips.push_back(std::move(t));
  }

  auto micro = micro_mobility_features(resident_trips, graph, config.coords);
  rep.zero_device_tracts = micro.zero_device_tracts;
  auto ai = active_index(resident_trips, graph, county.population);
  auto density = poi_density(county.pois, config.naics, graph);

  VisitationWindow window;
  if (config.window_start) {
    window.start = *config.window_start;
  } else {
    window.start = 0;
    bool first = true;
    for (const auto& s : county.stops) {
      if (first || s.arrival_utc < window.start) window.start = s.arrival_utc;
      first = false;
    }
  }
  if (config.window_weeks) {
    window.weeks = *config.window_weeks;
  } else {
    std::int64_t max_arrival = window.start;
    for (const auto& s : county.stops) max_arrival = std::max(max_arrival, s.arrival_utc);
    window.weeks = 1 + static_cast<int>((max_arrival - window.start) / (7 * 86400));
  }
  rep.window_start = window.start;
  rep.window_weeks = window.weeks;

  auto visitation = adjusted_visitation(county.stops, county.pois, homes, config.naics,
                                        county.population, graph, window);

  // demographic and emission columns with median imputation
  std::vector<double> age(n), income(n), minority(n), emission(n);
  {
    std::vector<double> present_age, present_inc, present_min, present_em;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = county.demographics.find(graph.node_id(i));
      double a = std::numeric_limits<double>::quiet_NaN();
      double inc = a, mi = a;
      if (it != county.demographics.end()) {
        a = it->second.age_pct_over65;
        inc = it->second.income;
        mi = it->second.minority_pct;
      }
      age[i] = a;
      income[i] = inc;
      minority[i] = mi;
      if (!std::isnan(a)) present_age.push_back(a);
      if (!std::isnan(inc)) present_inc.push_back(inc);
      if (!std::isnan(mi)) present_min.push_back(mi);

      double em = std::numeric_limits<double>::quiet_NaN();
      if (county.emission_present) {
        auto ei = county.emission.find(graph.node_id(i));
        if (ei != county.emission.end()) em = ei->second;
      }
      emission[i] = em;
      if (!std::isnan(em)) present_em.push_back(em);
    }
    const double med_age = median(present_age);
    const double med_inc = median(present_inc);
    const double med_min = median(present_min);
    const double med_em = median(present_em);
    auto impute = [&rep](std::vector<double>& col, double med, const std::string& name) {
      std::size_t count = 0;
      for (double& v : col) {
        if (std::isnan(v)) {
          v = med;
          ++count;
        }
      }
      if (count) rep.imputed[name] = count;
    };
    impute(age, med_age, "Age");
    impute(income, med_inc, "Income");
    impute(minority, med_min, "Minority");
    impute(emission, med_em, "Emission");
  }

  FeatureTable table;
  table.tract_ids = graph.node_ids();
  table.columns = kFeatureColumns;
  table.values = Matrix(n, kFeatureColumns.size());
  auto put = [&table](std::size_t col, const std::vector<double>& v) {
    for (std::size_t r = 0; r < v.size(); ++r) table.values(r, col) = v[r];
  };
  put(0, age);
  put(1, income);
  put(2, minority);
  put(3, density[0]);
  put(4, density[1]);
  put(5, density[2]);
  put(6, density[3]);
  put(7, emission);
  put(8, micro.avg_time);
  put(9, micro.avg_trips);
  put(10, micro.avg_distance);
  put(11, micro.avg_rog);
  put(12, visitation[0]);
  put(13, visitation[1]);
  put(14, visitation[2]);
  put(15, visitation[3]);
  put(16, ai);

  if (!table.values.all_finite()) {
    throw InternalError("assemble: non-finite feature value after imputation");
  }

  for (std::size_t d = 0; d < kDiseases.size(); ++d) {
    std::vector<double> prevalence(n);
    for (std::size_t i = 0; i < n; ++i) prevalence[i] = county.health.at(graph.node_id(i))[d];
    table.labels[kDiseases[d]] = quantile_labels(prevalence);
  }
  table.imputed = rep.imputed;

  if (report) *report = rep;
  return table;
}

// ---- persistence -----------------------------------------------------------

std::string meta_path_for(const std::string& csv_path) {
  if (csv_path.size() > 4 && csv_path.ends_with(".csv")) {
    return csv_path.substr(0, csv_path.size() - 4) + ".meta.json";
  }
  return csv_path + ".meta.json";
}

void save_feature_table(const std::string& csv_path, const FeatureTable& table,
                        const AssemblyReport& report) {
  std::vector<std::string> header{"tract_id"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  header.insert(header.end(), kDiseases.begin(), kDiseases.end());
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.tract_ids.size());
  for (std::size_t r = 0; r < table.tract_ids.size(); ++r) {
    std::vector<std::string> row{table.tract_ids[r]};
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      row.push_back(format_double(table.values(r, c)));
    }
    for (const auto& disease : kDiseases) {
      auto it = table.labels.find(disease);
      row.push_back(it == table.labels.end() ? "" : std::to_string(it->second[r]));
    }
    rows.push_back(std::move(row));
  }
  write_csv(csv_path, header, rows);

  nlohmann::json meta;
  meta["schema_version"] = 1;
  meta["columns"] = table.columns;
  meta["standardization"]["mean"] = table.col_mean;
  meta["standardization"]["std"] = table.col_std;
  meta["imputed_counts"] = table.imputed;
  meta["devices_total"] = report.devices_total;
  meta["devices_with_home"] = report.devices_with_home;
  meta["trips_dropped_no_home"] = report.trips_dropped_no_home;
  meta["zero_device_tracts"] = report.zero_device_tracts;
  meta["window"]["start"] = format_utc_timestamp(report.window_start);
  meta["window"]["weeks"] = report.window_weeks;
  std::ofstream out(meta_path_for(csv_path), std::ios::binary);
  if (!out) throw InputError("cannot write " + meta_path_for(csv_path));
  out << meta.dump(2) << '\n';
}

FeatureTable load_feature_table(const std::string& csv_path) {
  CsvTable csv = read_csv(csv_path);
  FeatureTable table;
  std::size_t cid = csv.require_column("tract_id");

  std::vector<std::string> feature_cols;
  for (const auto& h : csv.header) {
    if (h == "tract_id") continue;
    if (std::find(kDiseases.begin(), kDiseases.end(), h) != kDiseases.end()) continue;
    feature_cols.push_back(h);
  }
  table.columns = feature_cols;
  table.values = Matrix(csv.rows.size(), feature_cols.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    table.tract_ids.push_back(csv.rows[r][cid]);
  }
  for (std::size_t c = 0; c < feature_cols.size(); ++c) {
    std::size_t src = csv.require_column(feature_cols[c]);
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      table.values(r, c) = parse_double(csv.rows[r][src], csv.path);
    }
  }
  for (const auto& disease : kDiseases) {
    if (!csv.has_column(disease)) continue;
    std::size_t src = csv.require_column(disease);
    std::vector<int> labels(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      long long v = parse_int(csv.rows[r][src], csv.path);
      if (v < 1 || v > 4) throw InputError(csv.path + ": label out of range 1..4");
      labels[r] = static_cast<int>(v);
    }
    table.labels[disease] = std::move(labels);
  }

  std::string meta_path = meta_path_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    nlohmann::json meta = nlohmann::json::parse(in);
    table.col_mean = meta["standardization"]["mean"].get<std::vector<double>>();
    table.col_std = meta["standardization"]["std"].get<std::vector<double>>();
    if (meta.contains("imputed_counts")) {
      table.imputed = meta["imputed_counts"].get<std::map<std::string, std::size_t>>();
    }
  }
  return table;
}

}  // namespace urbanhealth
