#include "lll/misra_gries.hpp"

#include <algorithm>
#include <string>

#include "lll/errors.hpp"

namespace lll {

namespace {

class EdgeColorer {
 public:
  EdgeColorer(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges, int palette)
      : edges_(edges), palette_(static_cast<std::size_t>(palette)), at_(n * palette_, -1), color_(edges.size(), -1) {}

  std::vector<int> run() {
    for (std::size_t e = 0; e < edges_.size(); ++e) color_edge(static_cast<int>(e));
    return color_;
  }

 private:
  int& slot(std::size_t v, int c) { return at_[v * palette_ + static_cast<std::size_t>(c)]; }
  bool is_free(std::size_t v, int c) { return slot(v, c) < 0; }

  int first_free(std::size_t v) {
    for (std::size_t c = 0; c < palette_; ++c) {
      if (is_free(v, static_cast<int>(c))) return static_cast<int>(c);
    }
    throw ContractViolation("vertex " + std::to_string(v) + " has no free color");
  }

  std::size_t other(int e, std::size_t v) const {
    const auto& [a, b] = edges_[static_cast<std::size_t>(e)];
    return static_cast<std::size_t>(a) == v ? static_cast<std::size_t>(b) : static_cast<std::size_t>(a);
  }

  void set(int e, int c) {
    const auto& [a, b] = edges_[static_cast<std::size_t>(e)];
    color_[static_cast<std::size_t>(e)] = c;
    slot(static_cast<std::size_t>(a), c) = e;
    slot(static_cast<std::size_t>(b), c) = e;
  }

  void unset(int e) {
    const int c = color_[static_cast<std::size_t>(e)];
    if (c < 0) return;
    const auto& [a, b] = edges_[static_cast<std::size_t>(e)];
    slot(static_cast<std::size_t>(a), c) = -1;
    slot(static_cast<std::size_t>(b), c) = -1;
    color_[static_cast<std::size_t>(e)] = -1;
  }

  void color_edge(int e0) {
    const auto u = static_cast<std::size_t>(edges_[static_cast<std::size_t>(e0)].first);
    // Maximal fan at u, starting with the uncolored edge.
    std::vector<int> fan_edges{e0};
    std::vector<std::size_t> fan{other(e0, u)};
    std::vector<char> in_fan_edge(palette_, 0);
    for (bool grown = true; grown;) {
      grown = false;
      const std::size_t last = fan.back();
      for (std::size_t c = 0; c < palette_ && !grown; ++c) {
        const int e = slot(u, static_cast<int>(c));
        if (e < 0 || in_fan_edge[c] || !is_free(last, static_cast<int>(c))) continue;
        in_fan_edge[c] = 1;
        fan_edges.push_back(e);
        fan.push_back(other(e, u));
        grown = true;
      }
    }
    const int c = first_free(u);
    const int d = first_free(fan.back());

    // Invert the cd-path starting at u.
    if (c != d) {
      std::vector<int> path;
      std::size_t v = u;
      int want = d;
      for (int e = slot(v, want); e >= 0; e = slot(v, want)) {
        path.push_back(e);
        v = other(e, v);
        want = want == d ? c : d;
      }
      std::vector<int> old(path.size());
      for (std::size_t i = 0; i < path.size(); ++i) {
        old[i] = color_[static_cast<std::size_t>(path[i])];
        unset(path[i]);
      }
      for (std::size_t i = 0; i < path.size(); ++i) set(path[i], old[i] == d ? c : d);
    }

    // First fan prefix that is still a fan and ends at a vertex with d free.
    std::size_t w = fan.size();
    for (std::size_t i = 0; i < fan.size(); ++i) {
      if (i > 0) {
        const int ci = color_[static_cast<std::size_t>(fan_edges[i])];
        if (ci < 0 || !is_free(fan[i - 1], ci)) break;
      }
      if (is_free(fan[i], d)) {
        w = i;
        break;
      }
    }
    if (w == fan.size()) throw ContractViolation("no fan vertex with the inverted color free");

    // Rotate the prefix and close it with d.
    for (std::size_t i = 0; i < w; ++i) {
      const int next_color = color_[static_cast<std::size_t>(fan_edges[i + 1])];
      unset(fan_edges[i + 1]);
      set(fan_edges[i], next_color);
    }
    set(fan_edges[w], d);
  }

  const std::vector<std::pair<NodeId, NodeId>>& edges_;
  std::size_t palette_;
  std::vector<int> at_;
  std::vector<int> color_;
};

}  // namespace

std::vector<int> misra_gries(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges,
                             int palette) {
  std::vector<std::size_t> degree(node_count, 0);
  for (const auto& [u, v] : edges) {
    if (u == v || u < 0 || v < 0 || static_cast<std::size_t>(u) >= node_count ||
        static_cast<std::size_t>(v) >= node_count) {
      throw InputError("edge list has a self-loop or an endpoint out of range");
    }
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  const std::size_t delta = node_count == 0 ? 0 : *std::max_element(degree.begin(), degree.end());
  if (palette < 0) palette = static_cast<int>(delta) + 1;
  if (static_cast<std::size_t>(palette) < delta + 1) {
    throw InputError("palette of " + std::to_string(palette) + " colors is below max degree + 1 = " +
                     std::to_string(delta + 1));
  }
  if (edges.empty()) return {};
  return EdgeColorer(node_count, edges, palette).run();
}

}  // namespace lll
