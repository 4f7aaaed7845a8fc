// Naive reference implementations used as oracles against the pipeline.
// Everything here recomputes results with plain per-record loops and stays
// independent of the library's aggregation code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "urbanhealth/graph.hpp"
#include "urbanhealth/pipeline.hpp"
#include "urbanhealth/records.hpp"
#include "urbanhealth/rng.hpp"

namespace oracle {

using urbanhealth::CoordMode;
using urbanhealth::PoiRecord;
using urbanhealth::Rng;
using urbanhealth::StopRecord;
using urbanhealth::TractGraph;
using urbanhealth::TripRecord;

inline double distance(double lon1, double lat1, double lon2, double lat2, CoordMode mode) {
  if (mode == CoordMode::planar) {
    return std::sqrt((lon2 - lon1) * (lon2 - lon1) + (lat2 - lat1) * (lat2 - lat1));
  }
  const double rad = 3.14159265358979323846 / 180.0;
  const double mlat = 0.5 * (lat1 + lat2) * rad;
  const double dx = (lon2 - lon1) * rad * std::cos(mlat) * 6371.0088;
  const double dy = (lat2 - lat1) * rad * 6371.0088;
  return std::sqrt(dx * dx + dy * dy);
}

inline double rog(const std::vector<std::pair<double, double>>& pts, CoordMode mode) {
  double cx = 0, cy = 0;
  for (auto& [x, y] : pts) {
    cx += x;
    cy += y;
  }
  cx /= pts.size();
  cy /= pts.size();
  double sumsq = 0;
  for (auto& [x, y] : pts) {
    double d = distance(x, y, cx, cy, mode);
    sumsq += d * d;
  }
  return std::sqrt(sumsq / pts.size());
}

// longest stay over 12 hours wins, earlier arrival then smaller tract id on ties
inline std::map<std::string, std::string> homes(const std::vector<StopRecord>& stops,
                                                double min_dwell = 720.0) {
  std::map<std::string, std::vector<StopRecord>> by_device;
  for (const auto& s : stops) by_device[s.device_id].push_back(s);
  std::map<std::string, std::string> out;
  for (auto& [dev, list] : by_device) {
    const StopRecord* best = nullptr;
    for (const auto& s : list) {
      if (s.dwell_min <= min_dwell) continue;
      if (!best || s.dwell_min > best->dwell_min ||
          (s.dwell_min == best->dwell_min && s.arrival_utc < best->arrival_utc) ||
          (s.dwell_min == best->dwell_min && s.arrival_utc == best->arrival_utc &&
           s.tract_id < best->tract_id)) {
        best = &s;
      }
    }
    if (best) out[dev] = best->tract_id;
  }
  return out;
}

struct MicroCols {
  std::vector<double> time, trips, distance, rog;
};

inline MicroCols micro(const std::vector<TripRecord>& trips,
                       const std::map<std::string, std::string>& home_of,
                       const TractGraph& graph, CoordMode mode) {
  MicroCols out;
  const std::size_t n = graph.node_count();
  out.time.assign(n, 0);
  out.trips.assign(n, 0);
  out.distance.assign(n, 0);
  out.rog.assign(n, 0);
  std::set<std::string> devices;
  for (const auto& t : trips) {
    if (home_of.count(t.device_id)) devices.insert(t.device_id);
  }
  std::vector<std::vector<std::string>> residents(n);
  for (const auto& d : devices) {
    residents[graph.require_index(home_of.at(d))].push_back(d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (residents[i].empty()) continue;
    double sum_t = 0, sum_c = 0, sum_d = 0, sum_r = 0;
    for (const auto& dev : residents[i]) {
      double tt = 0, td = 0;
      int count = 0;
      std::vector<std::pair<double, double>> pts;
      for (const auto& trip : trips) {
        if (trip.device_id != dev) continue;
        tt += trip.duration_min;
        td += trip.distance_km;
        ++count;
        for (auto& p : trip.path) pts.push_back(p);
      }
      sum_t += tt / count;
      sum_c += count;
      sum_d += td / count;
      sum_r += rog(pts, mode);
    }
    double m = static_cast<double>(residents[i].size());
    out.time[i] = sum_t / m;
    out.trips[i] = sum_c / m;
    out.distance[i] = sum_d / m;
    out.rog[i] = sum_r / m;
  }
  return out;
}

inline std::vector<double> active_index(const std::vector<TripRecord>& trips,
                                        const TractGraph& graph,
                                        const std::unordered_map<std::string, double>& pop) {
  const std::size_t n = graph.node_count();
  std::vector<double> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> in, outgoing;
    for (const auto& t : trips) {
      if (t.origin_tract == t.dest_tract) continue;
      if (graph.require_index(t.dest_tract) == i) in.insert(t.device_id);
      if (graph.require_index(t.origin_tract) == i) outgoing.insert(t.device_id);
    }
    double p = pop.count(graph.node_id(i)) ? pop.at(graph.node_id(i)) : 0.0;
    if (p > 0) out[i] = static_cast<double>(in.size() + outgoing.size()) / p;
  }
  return out;
}

inline std::map<std::string, std::map<std::string, int>> poi_counts(
    const std::vector<PoiRecord>& pois, const urbanhealth::NaicsCategoryMap& map) {
  std::map<std::string, std::map<std::string, int>> out;  // tract -> category -> n
  for (const auto& p : pois) {
    auto cat = map.category_of(p.naics);
    if (cat) out[p.tract_id][*cat] += 1;
  }
  return out;
}

// weekly counts then mean over weeks then population division
inline std::map<std::string, std::map<std::string, double>> visitation(
    const std::vector<StopRecord>& stops, const std::vector<PoiRecord>& pois,
    const std::map<std::string, std::string>& home_of,
    const urbanhealth::NaicsCategoryMap& map,
    const std::unordered_map<std::string, double>& pop, std::int64_t start, int weeks) {
  std::map<std::string, std::string> poi_cat;
  for (const auto& p : pois) {
    auto c = map.category_of(p.naics);
    if (c) poi_cat[p.poi_id] = *c;
  }
  std::map<std::string, std::map<std::string, double>> out;
  for (int w = 0; w < weeks; ++w) {
    std::int64_t lo = start + static_cast<std::int64_t>(w) * 7 * 86400;
    std::int64_t hi = lo + 7 * 86400;
    for (const auto& s : stops) {
      if (s.poi_id.empty() || !poi_cat.count(s.poi_id)) continue;
      if (!home_of.count(s.device_id)) continue;
      if (s.arrival_utc < lo || s.arrival_utc >= hi) continue;
      out[home_of.at(s.device_id)][poi_cat.at(s.poi_id)] += 1.0;
    }
  }
  for (auto& [tract, cats] : out) {
    for (auto& [c, v] : cats) v = v / weeks / pop.at(tract);
  }
  return out;
}

// sort-and-split labels for distinct values with n divisible by 4
inline std::vector<int> quartile_split(const std::vector<double>& values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::size_t quarter = values.size() / 4;
  std::vector<int> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t pos =
        std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin();
    out[i] = static_cast<int>(std::min<std::size_t>(pos / quarter, 3)) + 1;
  }
  return out;
}

// ---- randomized small instance ---------------------------------------------

struct SmallInstance {
  std::vector<std::string> tract_ids;
  std::unordered_map<std::string, double> population;
  std::vector<PoiRecord> pois;
  std::vector<StopRecord> stops;
  std::vector<TripRecord> trips;  // home_tract unresolved
  TractGraph graph;
  std::int64_t window_start = 0;
  int window_weeks = 1;
};

inline SmallInstance random_instance(Rng& rng) {
  SmallInstance inst;
  const std::size_t n_tracts = 2 + rng.next_index(9);  // 2..10
  for (std::size_t i = 0; i < n_tracts; ++i) inst.tract_ids.push_back("t" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i + 1 < n_tracts; ++i) {
    edges.emplace_back(inst.tract_ids[i], inst.tract_ids[i + 1]);
  }
  inst.graph = TractGraph::build(inst.tract_ids, edges, true);
  for (const auto& id : inst.tract_ids) {
    inst.population[id] = 50.0 + static_cast<double>(rng.next_index(500));
  }

  const char* naics_pool[] = {"445110", "622110", "722511", "713940", "522120", "62",
                              "999999", "4451"};
  const std::size_t n_pois = 3 + rng.next_index(13);
  for (std::size_t p = 0; p < n_pois; ++p) {
    PoiRecord poi;
    poi.poi_id = "p" + std::to_string(p);
    poi.tract_id = inst.tract_ids[rng.next_index(n_tracts)];
    poi.naics = naics_pool[rng.next_index(8)];
    poi.lon = rng.next_uniform(-83.3, -83.0);
    poi.lat = rng.next_uniform(42.0, 42.3);
    inst.pois.push_back(poi);
  }

  inst.window_start = 1580515200;  // 2020-02-01T00:00:00Z
  inst.window_weeks = 1 + static_cast<int>(rng.next_index(3));
  const std::int64_t span = static_cast<std::int64_t>(inst.window_weeks) * 7 * 86400;

  const std::size_t n_devices = 1 + rng.next_index(20);
  for (std::size_t d = 0; d < n_devices; ++d) {
    std::string dev = "d" + std::to_string(d);
    const bool homed = rng.next_double() < 0.8;
    StopRecord home;
    home.device_id = dev;
    home.tract_id = inst.tract_ids[rng.next_index(n_tracts)];
    home.lon = rng.next_uniform(-83.3, -83.0);
    home.lat = rng.next_uniform(42.0, 42.3);
    home.arrival_utc = inst.window_start + static_cast<std::int64_t>(rng.next_index(span));
    home.dwell_min = homed ? 721.0 + rng.next_uniform(0, 600) : rng.next_uniform(0, 700);
    inst.stops.push_back(home);

    const std::size_t n_visits = rng.next_index(6);
    for (std::size_t v = 0; v < n_visits; ++v) {
      StopRecord s;
      s.device_id = dev;
      const PoiRecord& poi = inst.pois[rng.next_index(inst.pois.size())];
      s.tract_id = poi.tract_id;
      s.lon = poi.lon;
      s.lat = poi.lat;
      s.arrival_utc = inst.window_start + static_cast<std::int64_t>(rng.next_index(span));
      s.dwell_min = rng.next_uniform(5, 120);
      s.poi_id = poi.poi_id;
      inst.stops.push_back(s);
    }

    const std::size_t n_trips = rng.next_index(5);
    for (std::size_t t = 0; t < n_trips; ++t) {
      TripRecord trip;
      trip.device_id = dev;
      trip.origin_tract = inst.tract_ids[rng.next_index(n_tracts)];
      trip.dest_tract = inst.tract_ids[rng.next_index(n_tracts)];
      trip.duration_min = rng.next_uniform(2, 90);
      trip.distance_km = rng.next_uniform(0.2, 40);
      const std::size_t n_pts = 1 + rng.next_index(5);
      for (std::size_t k = 0; k < n_pts; ++k) {
        trip.path.emplace_back(rng.next_uniform(-83.3, -83.0), rng.next_uniform(42.0, 42.3));
      }
      inst.trips.push_back(trip);
    }
  }
  return inst;
}

}  // namespace oracle
