// Copyright 2026 The nexthop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEXTHOP_MODEL_HPP
#define NEXTHOP_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nexthop {

using NodeId = std::uint32_t;

/// Raised when a network breaks one of the structural assumptions the
/// dynamics rely on. Each violated invariant has its own kind.
class NetworkError : public std::runtime_error {
 public:
  enum class Kind {
    kTooFewNodes,
    kNodeOutOfRange,
    kSinkOutArc,
    kSelfPreference,
    kDuplicatePreference,
    kUnreachable,
  };

  NetworkError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Dense membership set over the node ids [0, n).
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t n) : bits_(n, false) {}

  static NodeSet all(std::size_t n) {
    NodeSet s(n);
    std::fill(s.bits_.begin(), s.bits_.end(), true);
    s.count_ = n;
    return s;
  }

  template <class Range>
  static NodeSet of(std::size_t n, const Range& ids) {
    NodeSet s(n);
    for (NodeId v : ids) s.insert(v);
    return s;
  }

  static NodeSet of(std::size_t n, std::initializer_list<NodeId> ids) {
    return of<std::initializer_list<NodeId>>(n, ids);
  }

  std::size_t universe() const noexcept { return bits_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(NodeId v) const { return v < bits_.size() && bits_[v]; }

  void insert(NodeId v) {
    if (!bits_.at(v)) {
      bits_[v] = true;
      ++count_;
    }
  }

  void erase(NodeId v) {
    if (bits_.at(v)) {
      bits_[v] = false;
      --count_;
    }
  }

  std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    out.reserve(count_);
    for (NodeId v = 0; v < bits_.size(); ++v) {
      if (bits_[v]) out.push_back(v);
    }
    return out;
  }

  NodeSet complement() const {
    NodeSet s(bits_.size());
    for (NodeId v = 0; v < bits_.size(); ++v) {
      if (!bits_[v]) s.insert(v);
    }
    return s;
  }

  NodeSet& operator|=(const NodeSet& other) {
    for (NodeId v : other.members()) insert(v);
    return *this;
  }

  bool is_subset_of(const NodeSet& other) const {
    for (NodeId v = 0; v < bits_.size(); ++v) {
      if (bits_[v] && !other.contains(v)) return false;
    }
    return true;
  }

  bool intersects(const NodeSet& other) const {
    for (NodeId v = 0; v < bits_.size(); ++v) {
      if (bits_[v] && other.contains(v)) return true;
    }
    return false;
  }

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out = a;
  out |= b;
  return out;
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out(a.universe());
  for (NodeId v : a.members()) {
    if (!b.contains(v)) out.insert(v);
  }
  return out;
}

inline NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out(a.universe());
  for (NodeId v : a.members()) {
    if (b.contains(v)) out.insert(v);
  }
  return out;
}

/// Formats as `{1,4,7}`.
inline std::string format_set(const NodeSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (NodeId v : s.members()) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '}';
  return os.str();
}

/// Static problem instance: the all-choice graph with per-node strict
/// next-hop rankings and filtering lists.
///
/// The constructor only checks that ids are in range; the semantic
/// assumptions (sink has no arcs, everything reaches the sink, ...) are
/// checked by validate_network().
class Network {
 public:
  Network() = default;

  Network(std::size_t n, NodeId sink, std::vector<std::vector<NodeId>> prefs,
          std::vector<std::vector<NodeId>> filters = {})
      : n_(n), sink_(sink), prefs_(std::move(prefs)), filters_(std::move(filters)) {
    if (n_ < 2) {
      throw NetworkError(NetworkError::Kind::kTooFewNodes,
                         "network needs at least 2 nodes");
    }
    if (sink_ >= n_) {
      throw NetworkError(NetworkError::Kind::kNodeOutOfRange,
                         "sink " + std::to_string(sink_) + " out of range");
    }
    prefs_.resize(n_);
    filters_.resize(n_);
    rank_.assign(n_ * n_, 0);
    filtered_.assign(n_ * n_, false);
    for (NodeId v = 0; v < n_; ++v) {
      const auto& row = prefs_[v];
      for (std::size_t k = 0; k < row.size(); ++k) {
        check_id(row[k]);
        // Keep the first occurrence; duplicates are reported by validation.
        if (rank_[v * n_ + row[k]] == 0) {
          rank_[v * n_ + row[k]] = static_cast<std::uint32_t>(k + 1);
        }
      }
      auto& filt = filters_[v];
      for (NodeId d : filt) check_id(d);
      std::sort(filt.begin(), filt.end());
      filt.erase(std::unique(filt.begin(), filt.end()), filt.end());
      for (NodeId d : filt) filtered_[v * n_ + d] = true;
    }
  }

  std::size_t size() const noexcept { return n_; }
  NodeId sink() const noexcept { return sink_; }

  /// Out-neighbours of v, most preferred first.
  std::span<const NodeId> prefs(NodeId v) const { return prefs_.at(v); }

  /// Sorted filtering list of v.
  std::span<const NodeId> filters(NodeId v) const { return filters_.at(v); }

  /// 1-based rank of w in v's preference order, or 0 when (v,w) is not an arc.
  std::uint32_t rank(NodeId v, NodeId w) const { return rank_[v * n_ + w]; }

  bool has_arc(NodeId v, NodeId w) const { return rank(v, w) != 0; }

  /// True when v refuses routes through x.
  bool filters_out(NodeId v, NodeId x) const { return filtered_[v * n_ + x]; }

  std::optional<NodeId> first_choice(NodeId v) const {
    if (prefs_.at(v).empty()) return std::nullopt;
    return prefs_[v].front();
  }

  /// True when x precedes y in v's ranking (both must be out-neighbours).
  bool prefers(NodeId v, NodeId x, NodeId y) const {
    return rank(v, x) != 0 && (rank(v, y) == 0 || rank(v, x) < rank(v, y));
  }

  std::size_t arc_count() const {
    std::size_t m = 0;
    for (const auto& row : prefs_) m += row.size();
    return m;
  }

  bool all_filters_empty() const {
    return std::all_of(filters_.begin(), filters_.end(),
                       [](const auto& f) { return f.empty(); });
  }

  /// Every non-sink filtering list is exactly {v}; the sink never chooses,
  /// so its list may also be empty.
  bool all_filters_self() const {
    for (NodeId v = 0; v < n_; ++v) {
      if (v == sink_ && filters_[v].empty()) continue;
      if (filters_[v].size() != 1 || filters_[v][0] != v) return false;
    }
    return true;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.n_ == b.n_ && a.sink_ == b.sink_ && a.prefs_ == b.prefs_ &&
           a.filters_ == b.filters_;
  }

 private:
  void check_id(NodeId v) const {
    if (v >= n_) {
      throw NetworkError(NetworkError::Kind::kNodeOutOfRange,
                         "node " + std::to_string(v) + " out of range");
    }
  }

  std::size_t n_ = 0;
  NodeId sink_ = 0;
  std::vector<std::vector<NodeId>> prefs_;
  std::vector<std::vector<NodeId>> filters_;
  std::vector<std::uint32_t> rank_;
  std::vector<bool> filtered_;
};

/// Checks the assumptions the dynamics depend on; throws NetworkError
/// naming the first violation found.
inline void validate_network(const Network& net) {
  const std::size_t n = net.size();
  const NodeId r = net.sink();
  if (!net.prefs(r).empty()) {
    throw NetworkError(NetworkError::Kind::kSinkOutArc,
                       "sink " + std::to_string(r) + " has outgoing arcs");
  }
  for (NodeId v = 0; v < n; ++v) {
    auto row = net.prefs(v);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] == v) {
        throw NetworkError(NetworkError::Kind::kSelfPreference,
                           "node " + std::to_string(v) + " ranks itself");
      }
      if (net.rank(v, row[k]) != k + 1) {
        throw NetworkError(NetworkError::Kind::kDuplicatePreference,
                           "node " + std::to_string(v) + " ranks " +
                               std::to_string(row[k]) + " twice");
      }
    }
  }
  // Reverse BFS from the sink over the all-choice graph.
  std::vector<std::vector<NodeId>> in(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : net.prefs(v)) in[w].push_back(v);
  }
  std::vector<bool> seen(n, false);
  std::deque<NodeId> queue{r};
  seen[r] = true;
  while (!queue.empty()) {
    NodeId w = queue.front();
    queue.pop_front();
    for (NodeId v : in[w]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw NetworkError(NetworkError::Kind::kUnreachable,
                         "node " + std::to_string(v) + " cannot reach the sink");
    }
  }
}

/// A node's believed route to the sink. Empty means the owner is opaque.
using RoutingPath = std::vector<NodeId>;

inline std::string format_path(const RoutingPath& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ' ';
    os << p[i];
  }
  os << ']';
  return os.str();
}

inline bool path_contains(const RoutingPath& p, NodeId v) {
  return std::find(p.begin(), p.end(), v) != p.end();
}

/// Arc set with out-degree at most one: each node's chosen next hop.
/// Components are 1-arborescences.
class RoutingGraph {
 public:
  RoutingGraph() = default;
  explicit RoutingGraph(std::size_t n) : next_(n) {}

  /// Every non-sink node picks its first choice.
  static RoutingGraph first_choice(const Network& net) {
    RoutingGraph g(net.size());
    for (NodeId v = 0; v < net.size(); ++v) {
      if (v != net.sink()) g.next_[v] = net.first_choice(v);
    }
    return g;
  }

  std::size_t size() const noexcept { return next_.size(); }
  std::optional<NodeId> next(NodeId v) const { return next_.at(v); }
  void set(NodeId v, NodeId w) { next_.at(v) = w; }
  void clear(NodeId v) { next_.at(v).reset(); }

  std::size_t arc_count() const {
    return static_cast<std::size_t>(
        std::count_if(next_.begin(), next_.end(), [](const auto& x) { return x.has_value(); }));
  }

  std::vector<std::pair<NodeId, NodeId>> arcs() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId v = 0; v < next_.size(); ++v) {
      if (next_[v]) out.emplace_back(v, *next_[v]);
    }
    return out;
  }

  /// True when every arc of this graph is also an arc of `other`.
  bool is_subgraph_of(const RoutingGraph& other) const {
    for (NodeId v = 0; v < next_.size(); ++v) {
      if (next_[v] && other.next(v) != next_[v]) return false;
    }
    return true;
  }

  friend bool operator==(const RoutingGraph&, const RoutingGraph&) = default;

 private:
  std::vector<std::optional<NodeId>> next_;
};

/// Formats as `{1->0,2->1}`.
inline std::string format_arcs(const RoutingGraph& g) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto [v, w] : g.arcs()) {
    if (!first) os << ',';
    os << v << "->" << w;
    first = false;
  }
  os << '}';
  return os.str();
}

/// Walks next hops from v. Returns the v,r-path when the walk reaches the
/// sink and the empty path when it closes a cycle or stops at a node
/// without a choice. The sink's own path is (r).
inline RoutingPath actual_path(const RoutingGraph& rg, NodeId sink, NodeId v) {
  RoutingPath p;
  std::vector<bool> seen(rg.size(), false);
  NodeId cur = v;
  while (true) {
    if (seen[cur]) return {};
    seen[cur] = true;
    p.push_back(cur);
    if (cur == sink) return p;
    auto nxt = rg.next(cur);
    if (!nxt) return {};
    cur = *nxt;
  }
}

/// {(u,v) in g : u in U}. Restricting to arcs with both ends in U gives the
/// induced subgraph; see induced().
inline RoutingGraph out_plus(const RoutingGraph& g, const NodeSet& U) {
  RoutingGraph out(g.size());
  for (auto [u, v] : g.arcs()) {
    if (U.contains(u)) out.set(u, v);
  }
  return out;
}

inline RoutingGraph induced(const RoutingGraph& g, const NodeSet& U) {
  RoutingGraph out(g.size());
  for (auto [u, v] : g.arcs()) {
    if (U.contains(u) && U.contains(v)) out.set(u, v);
  }
  return out;
}

/// In-arborescence rooted at the sink over a subset of the nodes: the sink
/// component of a routing graph, or a spanning tree when every node is a
/// member.
class Tree {
 public:
  Tree() = default;
  Tree(NodeId sink, std::size_t n) : sink_(sink), arcs_(n), nodes_(n) {
    nodes_.insert(sink);
  }

  /// Builds the tree from a parent map; members are the sink plus every node
  /// that has a parent. Throws std::invalid_argument unless the arcs form an
  /// in-arborescence rooted at the sink.
  static Tree from_arcs(NodeId sink, const RoutingGraph& arcs) {
    Tree t(sink, arcs.size());
    for (auto [v, w] : arcs.arcs()) {
      if (v == sink) throw std::invalid_argument("tree arc leaves the sink");
      t.arcs_.set(v, w);
      t.nodes_.insert(v);
    }
    for (auto [v, w] : arcs.arcs()) {
      if (!t.nodes_.contains(w)) {
        throw std::invalid_argument("tree arc " + std::to_string(v) + "->" +
                                    std::to_string(w) + " enters a non-member");
      }
    }
    for (NodeId v : t.nodes_.members()) {
      if (actual_path(t.arcs_, sink, v).empty()) {
        throw std::invalid_argument("node " + std::to_string(v) +
                                    " does not reach the sink in the tree");
      }
    }
    return t;
  }

  /// Spanning tree from a per-node parent list (the sink's entry ignored).
  static Tree spanning(NodeId sink, const std::vector<NodeId>& parent) {
    RoutingGraph g(parent.size());
    for (NodeId v = 0; v < parent.size(); ++v) {
      if (v != sink) g.set(v, parent[v]);
    }
    return from_arcs(sink, g);
  }

  NodeId sink() const noexcept { return sink_; }
  std::size_t universe() const noexcept { return arcs_.size(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const NodeSet& nodes() const noexcept { return nodes_; }
  const RoutingGraph& arcs() const noexcept { return arcs_; }
  bool contains(NodeId v) const { return nodes_.contains(v); }
  bool is_spanning() const { return nodes_.size() == arcs_.size(); }
  std::optional<NodeId> parent(NodeId v) const { return arcs_.next(v); }

  /// Re-points v at w. The caller is responsible for keeping the result a
  /// tree; is_valid() re-checks it.
  void set_parent(NodeId v, NodeId w) {
    arcs_.set(v, w);
    nodes_.insert(v);
  }

  bool is_valid() const {
    for (NodeId v : nodes_.members()) {
      if (v == sink_) {
        if (arcs_.next(v)) return false;
        continue;
      }
      auto p = arcs_.next(v);
      if (!p || !nodes_.contains(*p)) return false;
      if (actual_path(arcs_, sink_, v).empty()) return false;
    }
    return arcs_.arc_count() + 1 == nodes_.size();
  }

  /// Hops from v up to the sink.
  std::size_t depth(NodeId v) const {
    std::size_t d = 0;
    NodeId cur = v;
    while (cur != sink_) {
      cur = *arcs_.next(cur);
      ++d;
    }
    return d;
  }

  RoutingPath path_to_sink(NodeId v) const { return actual_path(arcs_, sink_, v); }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.sink_ == b.sink_ && a.arcs_ == b.arcs_ && a.nodes_ == b.nodes_;
  }

 private:
  NodeId sink_ = 0;
  RoutingGraph arcs_;
  NodeSet nodes_;
};

/// Sink component of a routing graph: every node whose walk reaches the
/// sink, together with its arc.
inline Tree sink_component(const RoutingGraph& rg, NodeId sink) {
  RoutingGraph arcs(rg.size());
  for (NodeId v = 0; v < rg.size(); ++v) {
    if (v != sink && !actual_path(rg, sink, v).empty()) arcs.set(v, *rg.next(v));
  }
  return Tree::from_arcs(sink, arcs);
}

/// The maximal subtree rooted at v of the forest tree[Q]: v plus every node
/// reaching v through tree arcs whose both ends stay inside Q.
inline NodeSet q_subtree(const Tree& tree, const NodeSet& Q, NodeId v) {
  if (!Q.contains(v)) {
    throw std::invalid_argument("q_subtree: node " + std::to_string(v) +
                                " not in Q");
  }
  const std::size_t n = tree.universe();
  std::vector<std::vector<NodeId>> children(n);
  for (auto [c, p] : tree.arcs().arcs()) {
    if (Q.contains(c) && Q.contains(p)) children[p].push_back(c);
  }
  NodeSet out(n);
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    if (out.contains(x)) continue;
    out.insert(x);
    for (NodeId c : children[x]) stack.push_back(c);
  }
  return out;
}

/// Components of the first-class network (rank-1 arcs only).
struct FirstClassDecomposition {
  std::vector<std::size_t> component_of;
  /// components[0] contains the sink; the rest are ordered by smallest member.
  std::vector<std::vector<NodeId>> components;
  /// cycle_of[0] is the degenerate cycle {sink}; every other entry starts at
  /// the cycle's smallest node and follows rank-1 arcs.
  std::vector<std::vector<NodeId>> cycle_of;

  std::size_t component_count() const { return components.size(); }

  NodeSet component_set(std::size_t j, std::size_t n) const {
    return NodeSet::of(n, components.at(j));
  }
};

inline FirstClassDecomposition first_class_decomposition(const Network& net) {
  const std::size_t n = net.size();
  const NodeId r = net.sink();
  auto first = [&](NodeId v) -> std::optional<NodeId> {
    return v == r ? std::nullopt : net.first_choice(v);
  };

  // Locate cycles of the functional graph (sink is a fixed point).
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> root_of(n, kUnset);  // index into roots
  std::vector<std::vector<NodeId>> cycles;
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  for (NodeId s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<NodeId> walk;
    NodeId cur = s;
    while (true) {
      if (state[cur] == 2) break;
      if (state[cur] == 1) {
        auto it = std::find(walk.begin(), walk.end(), cur);
        std::vector<NodeId> cyc(it, walk.end());
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
        std::size_t id = cycles.size();
        cycles.push_back(cyc);
        for (NodeId c : cyc) root_of[c] = id;
        break;
      }
      state[cur] = 1;
      walk.push_back(cur);
      auto nxt = first(cur);
      if (!nxt) {
        // Only the sink has no first choice in a validated network.
        std::size_t id = cycles.size();
        cycles.push_back({cur});
        root_of[cur] = id;
        break;
      }
      cur = *nxt;
    }
    NodeId tail_end = cur;
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      if (root_of[*it] == kUnset) root_of[*it] = root_of[tail_end];
      state[*it] = 2;
    }
  }

  // Renumber: sink component first, then by smallest member.
  std::vector<std::vector<NodeId>> members(cycles.size());
  for (NodeId v = 0; v < n; ++v) members[root_of[v]].push_back(v);
  std::vector<std::size_t> order(cycles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t sink_comp = root_of[r];
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if ((a == sink_comp) != (b == sink_comp)) return a == sink_comp;
    return members[a].front() < members[b].front();
  });

  FirstClassDecomposition fcd;
  fcd.component_of.assign(n, 0);
  for (std::size_t j = 0; j < order.size(); ++j) {
    fcd.components.push_back(members[order[j]]);
    fcd.cycle_of.push_back(cycles[order[j]]);
    for (NodeId v : members[order[j]]) fcd.component_of[v] = j;
  }
  return fcd;
}

}  // namespace nexthop

#endif  // NEXTHOP_MODEL_HPP
