#include "lll/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "lll/errors.hpp"

namespace lll {

namespace {

void check_node(const Graph& g, NodeId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.node_count()) {
    throw InputError("node id " + std::to_string(v) + " out of range [0, " +
                     std::to_string(g.node_count()) + ")");
  }
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::vector<NodeId>> adj(node_count);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= node_count ||
        static_cast<std::size_t>(v) >= node_count) {
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    if (u == v) throw InputError("self-loop at node " + std::to_string(u));
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return from_adjacency(std::move(adj));
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
  Graph g;
  const std::size_t n = adjacency.size();
  std::size_t total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& list = adjacency[v];
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      const NodeId w = list[i];
      if (w < 0 || static_cast<std::size_t>(w) >= n) {
        throw InputError("adjacency of node " + std::to_string(v) + " lists out-of-range id " +
                         std::to_string(w));
      }
      if (static_cast<std::size_t>(w) == v) throw InputError("self-loop at node " + std::to_string(v));
      if (i > 0 && list[i - 1] == w) {
        throw InputError("duplicate edge (" + std::to_string(v) + ", " + std::to_string(w) + ")");
      }
    }
    total += list.size();
    g.max_degree_ = std::max(g.max_degree_, list.size());
  }
  g.adjacency_ = std::move(adjacency);
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId w : g.adjacency_[v]) {
      const auto& back = g.adjacency_[static_cast<std::size_t>(w)];
      if (!std::binary_search(back.begin(), back.end(), static_cast<NodeId>(v))) {
        throw InputError("adjacency is not symmetric at (" + std::to_string(v) + ", " +
                         std::to_string(w) + ")");
      }
    }
  }
  g.edge_count_ = total / 2;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nu = neighbors(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (static_cast<NodeId>(u) < v) out.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  return out;
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
  std::vector<NodeId> relabel(node_count(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_node(*this, nodes[i]);
    relabel[static_cast<std::size_t>(nodes[i])] = static_cast<NodeId>(i);
  }
  std::vector<std::vector<NodeId>> adj(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : neighbors(nodes[i])) {
      const NodeId r = relabel[static_cast<std::size_t>(w)];
      if (r >= 0) adj[i].push_back(r);
    }
  }
  return from_adjacency(std::move(adj));
}

void Partition::validate(std::size_t node_count) const {
  if (assignment.size() != node_count) {
    throw InputError("partition covers " + std::to_string(assignment.size()) + " nodes, expected " +
                     std::to_string(node_count));
  }
  if (part_count == 0 && node_count > 0) throw InputError("partition has zero parts");
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] < 0 || static_cast<std::size_t>(assignment[v]) >= part_count) {
      throw InputError("node " + std::to_string(v) + " has part index " + std::to_string(assignment[v]) +
                       " outside [0, " + std::to_string(part_count) + ")");
    }
  }
}

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(part_count);
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    out[static_cast<std::size_t>(assignment[v])].push_back(static_cast<NodeId>(v));
  }
  return out;
}

std::vector<NodeId> neighbors_within(const Graph& g, NodeId v, std::size_t k) {
  check_node(g, v);
  if (k == 0) return {};
  std::vector<std::size_t> dist(g.node_count(), SIZE_MAX);
  std::vector<NodeId> out;
  std::vector<NodeId> frontier{v};
  dist[static_cast<std::size_t>(v)] = 0;
  for (std::size_t level = 1; level <= k && !frontier.empty(); ++level) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId w : g.neighbors(u)) {
        auto& dw = dist[static_cast<std::size_t>(w)];
        if (dw == SIZE_MAX) {
          dw = level;
          next.push_back(w);
          out.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> per_part_neighbor_counts(const Graph& g, const Partition& part, NodeId v) {
  part.validate(g.node_count());
  check_node(g, v);
  std::vector<std::size_t> counts(part.part_count, 0);
  for (NodeId w : g.neighbors(v)) ++counts[static_cast<std::size_t>(part.assignment[static_cast<std::size_t>(w)])];
  return counts;
}

std::span<const NodeId> HopIndex::two_hop(NodeId v) {
  const auto i = static_cast<std::size_t>(v);
  if (!built_.at(i)) {
    two_hop_[i] = neighbors_within(*graph_, v, 2);
    built_[i] = 1;
  }
  return two_hop_[i];
}

Graph read_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t declared = 0;
  NodeId max_id = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream header(line.substr(hash + 1));
      std::string word;
      std::size_t n = 0;
      if (header >> word >> n && word == "nodes") declared = n;
      line.resize(hash);
    }
    std::istringstream ls(line);
    long long u = 0, v = 0;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!(ls >> u)) throw InputError("line " + std::to_string(line_no) + ": expected a node id");
    if (!(ls >> v)) throw InputError("line " + std::to_string(line_no) + ": expected two node ids");
    std::string rest;
    if (ls >> rest) throw InputError("line " + std::to_string(line_no) + ": trailing content");
    if (u < 0 || v < 0 || u > INT32_MAX || v > INT32_MAX) {
      throw InputError("line " + std::to_string(line_no) + ": node id out of range");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_id = std::max({max_id, static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  const std::size_t n = std::max(declared, static_cast<std::size_t>(max_id + 1));
  return Graph::from_edges(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.node_count() << "\n";
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace lll
