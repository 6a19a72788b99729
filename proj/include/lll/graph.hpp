#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lll {

using NodeId = std::int32_t;

// Simple undirected graph over dense ids 0..n-1 with sorted adjacency lists.
// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Throws InputError on out-of-range endpoints, self-loops or duplicate edges.
  static Graph from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges);

  // Builds from adjacency lists that are already symmetric; lists are sorted
  // and validated. Used by internal builders that produce both directions.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t degree(NodeId v) const { return adjacency_.at(static_cast<std::size_t>(v)).size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return adjacency_.at(static_cast<std::size_t>(v));
  }

  bool has_edge(NodeId u, NodeId v) const;

  // Each edge once, as (u, v) with u < v, in ascending lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Subgraph on the given node subset, relabelled 0..k-1 in the order given.
  Graph induced(std::span<const NodeId> nodes) const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
  std::size_t max_degree_ = 0;
};

// Assignment of nodes (or events) to parts 0..part_count-1.
struct Partition {
  std::size_t part_count = 0;
  std::vector<std::int32_t> assignment;

  static Partition single(std::size_t node_count) {
    return Partition{1, std::vector<std::int32_t>(node_count, 0)};
  }

  // Throws InputError if any index is outside [0, part_count).
  void validate(std::size_t node_count) const;

  std::vector<std::vector<NodeId>> members() const;
};

// All nodes at distance 1..k from v (v excluded). k == 0 yields the empty set.
// Result is sorted ascending.
std::vector<NodeId> neighbors_within(const Graph& g, NodeId v, std::size_t k);

// Entry i = |N(v) ∩ P_i|.
std::vector<std::size_t> per_part_neighbor_counts(const Graph& g, const Partition& part, NodeId v);

// Memoised 1- and 2-hop neighbourhoods, built on first request per node.
class HopIndex {
 public:
  explicit HopIndex(const Graph& g) : graph_(&g), two_hop_(g.node_count()), built_(g.node_count(), 0) {}

  std::span<const NodeId> one_hop(NodeId v) const { return graph_->neighbors(v); }
  std::span<const NodeId> two_hop(NodeId v);

 private:
  const Graph* graph_;
  std::vector<std::vector<NodeId>> two_hop_;
  std::vector<std::uint8_t> built_;
};

// Edge-list text: one "u v" pair per line, 0-indexed, '#' starts a comment.
// The node count is 1 + the largest id, or the value of a "# nodes N" header.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace lll
