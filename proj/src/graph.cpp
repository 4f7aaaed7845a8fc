#include "urbanhealth/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "urbanhealth/csv.hpp"
#include "urbanhealth/errors.hpp"

namespace urbanhealth {

TractGraph TractGraph::build(const std::vector<std::string>& node_ids,
                             const std::vector<std::pair<std::string, std::string>>& edges,
                             bool add_self_loops) {
  if (node_ids.empty()) throw InputError("build_graph: zero nodes");

  TractGraph g;
  g.ids_ = node_ids;
  g.self_loops_ = add_self_loops;
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    if (!g.index_.emplace(node_ids[i], i).second) {
      throw InputError("build_graph: duplicate node id '" + node_ids[i] + "'");
    }
  }

  const std::size_t n = node_ids.size();
  std::set<std::pair<int, int>> undirected;
  for (const auto& [a, b] : edges) {
    auto ia = g.index_.find(a);
    if (ia == g.index_.end()) throw InputError("build_graph: unknown node id '" + a + "'");
    auto ib = g.index_.find(b);
    if (ib == g.index_.end()) throw InputError("build_graph: unknown node id '" + b + "'");
    int u = static_cast<int>(ia->second);
    int v = static_cast<int>(ib->second);
    undirected.insert({std::min(u, v), std::max(u, v)});
  }
  g.edge_count_ = 0;
  for (const auto& [u, v] : undirected) {
    if (u != v) ++g.edge_count_;
  }

  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : undirected) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    if (u != v) adj[static_cast<std::size_t>(v)].push_back(u);
  }
  if (add_self_loops) {
    for (std::size_t i = 0; i < n; ++i) {
      int self = static_cast<int>(i);
      if (!std::count(adj[i].begin(), adj[i].end(), self)) adj[i].push_back(self);
    }
  }

  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    g.offsets_[i + 1] = g.offsets_[i] + adj[i].size();
  }
  g.cols_.reserve(g.offsets_[n]);
  for (const auto& nbrs : adj) g.cols_.insert(g.cols_.end(), nbrs.begin(), nbrs.end());
  return g;
}

const std::string& TractGraph::node_id(std::size_t i) const {
  if (i >= node_count()) throw InputError("node index out of range");
  return ids_[i];
}

std::optional<std::size_t> TractGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TractGraph::require_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown tract id '" + id + "'");
  return it->second;
}

std::span<const int> TractGraph::neighbors(std::size_t i) const {
  if (i >= node_count()) throw InputError("neighbors: node index out of range");
  return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::vector<std::size_t> TractGraph::n_hop(std::size_t i, std::size_t hops) const {
  if (i >= node_count()) throw InputError("n_hop: node index out of range");
  if (hops < 1) throw InputError("n_hop: hop count must be >= 1");
  std::vector<int> dist(node_count(), -1);
  std::deque<std::size_t> queue;
  dist[i] = 0;
  queue.push_back(i);
  std::vector<std::size_t> out;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    out.push_back(u);
    if (static_cast<std::size_t>(dist[u]) == hops) continue;
    for (int vi : neighbors(u)) {
      std::size_t v = static_cast<std::size_t>(vi);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> load_edge_list_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  std::size_t src = t.require_column("src_tract");
  std::size_t dst = t.require_column("dst_tract");
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(t.rows.size());
  for (const auto& row : t.rows) edges.emplace_back(row[src], row[dst]);
  return edges;
}

void save_edge_list_csv(const std::string& path,
                        const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(edges.size());
  for (const auto& [a, b] : edges) rows.push_back({a, b});
  write_csv(path, {"src_tract", "dst_tract"}, rows);
}

}  // namespace urbanhealth
