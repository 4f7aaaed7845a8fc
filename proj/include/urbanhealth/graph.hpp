#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace urbanhealth {

// Immutable undirected graph over spatial units. Nodes carry external tract
// ids; all math uses dense indices. Neighbor lists are CSR, sorted,
// symmetric, deduplicated, and contain the node itself when self-loops are
// on (the default, so every attention mask is non-empty).
class TractGraph {
 public:
  static TractGraph build(const std::vector<std::string>& node_ids,
                          const std::vector<std::pair<std::string, std::string>>& edges,
                          bool add_self_loops = true);

  std::size_t node_count() const { return offsets_.size() - 1; }
  bool has_self_loops() const { return self_loops_; }

  const std::string& node_id(std::size_t i) const;
  std::optional<std::size_t> index_of(const std::string& id) const;
  std::size_t require_index(const std::string& id) const;
  const std::vector<std::string>& node_ids() const { return ids_; }

  std::span<const int> neighbors(std::size_t i) const;

  // all nodes within graph distance <= hops of i, including i, sorted
  std::vector<std::size_t> n_hop(std::size_t i, std::size_t hops) const;

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const int> adjacency() const { return cols_; }

  // undirected edge count before self-loop insertion
  std::size_t edge_count() const { return edge_count_; }

 private:
  TractGraph() = default;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> offsets_;
  std::vector<int> cols_;
  bool self_loops_ = false;
  std::size_t edge_count_ = 0;
};

// Reads `src_tract,dst_tract` rows (header required).
std::vector<std::pair<std::string, std::string>> load_edge_list_csv(const std::string& path);
void save_edge_list_csv(const std::string& path,
                        const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace urbanhealth
