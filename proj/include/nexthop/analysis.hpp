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

#ifndef NEXTHOP_ANALYSIS_HPP
#define NEXTHOP_ANALYSIS_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nexthop/engine.hpp"
#include "nexthop/model.hpp"

namespace nexthop {

struct StableTreeReport {
  struct Violation {
    enum class Kind {
      /// The parent's tree path meets the node's filtering list.
      kInvalidParent,
      /// The node ranks another valid neighbour above its parent.
      kPrefersOther,
    };
    NodeId node = 0;
    NodeId neighbor = 0;
    Kind kind = Kind::kPrefersOther;

    friend bool operator==(const Violation&, const Violation&) = default;
  };

  RoutingGraph tree;
  std::size_t size = 1;
  std::optional<Violation> witness_violation;
  /// Nodes outside the tree that have a valid choice w.r.t. the tree. A
  /// stable tree with a non-empty list is not an equilibrium.
  std::vector<NodeId> external_blocking;

  bool stable() const { return !witness_violation.has_value(); }
};

/// x is valid for u w.r.t. the tree: x is a member and its tree path avoids
/// u's filtering list.
inline bool valid_in_tree(const Network& net, const Tree& t, NodeId u, NodeId x) {
  if (!t.contains(x)) return false;
  for (NodeId y : t.path_to_sink(x)) {
    if (net.filters_out(u, y)) return false;
  }
  return true;
}

/// Stability of a (possibly non-spanning) tree: every tree arc points at a
/// valid node, and no tail ranks another valid neighbour above its parent.
inline StableTreeReport is_stable_tree(const Network& net, const Tree& t) {
  if (!t.is_valid()) throw std::invalid_argument("is_stable_tree: not an in-arborescence");
  StableTreeReport rep;
  rep.tree = t.arcs();
  rep.size = t.size();
  for (NodeId u = 0; u < net.size(); ++u) {
    if (u == net.sink()) continue;
    if (!t.contains(u)) {
      for (NodeId x : net.prefs(u)) {
        if (valid_in_tree(net, t, u, x)) {
          rep.external_blocking.push_back(u);
          break;
        }
      }
      continue;
    }
    if (rep.witness_violation) continue;
    NodeId p = *t.parent(u);
    if (!net.has_arc(u, p)) throw std::invalid_argument("tree arc is not a network arc");
    if (!valid_in_tree(net, t, u, p)) {
      rep.witness_violation = {u, p, StableTreeReport::Violation::Kind::kInvalidParent};
      continue;
    }
    for (NodeId x : net.prefs(u)) {
      if (x == p) break;
      if (valid_in_tree(net, t, u, x)) {
        rep.witness_violation = {u, x, StableTreeReport::Violation::Kind::kPrefersOther};
        break;
      }
    }
  }
  return rep;
}

/// Every v in O (other than the sink) ranks its parent in S above every
/// node outside its O-subtree.
inline bool has_strong_stability(const Network& net, const Tree& s, const NodeSet& O) {
  for (NodeId v : O.members()) {
    if (v == net.sink()) continue;
    auto parent = s.parent(v);
    if (!parent || !net.has_arc(v, *parent)) return false;
    NodeSet sub = q_subtree(s, O, v);
    for (NodeId x : net.prefs(v)) {
      if (sub.contains(x)) continue;
      if (x != *parent) return false;
      break;
    }
  }
  return true;
}

/// Roots of the maximal subtrees of the forest S[O].
inline std::vector<NodeId> forest_roots(const Tree& s, const NodeSet& O) {
  std::vector<NodeId> roots;
  for (NodeId v : O.members()) {
    auto p = s.parent(v);
    if (!p || !O.contains(*p)) roots.push_back(v);
  }
  return roots;
}

/// S is a skeleton of T w.r.t. O: every maximal subtree F of S[O] either has
/// all of its S-arcs (including the one leaving F) inside T, or shares no
/// node with T.
inline bool is_skeleton(const Tree& s, const Tree& t, const NodeSet& O) {
  for (NodeId root : forest_roots(s, O)) {
    NodeSet f = q_subtree(s, O, root);
    bool any_in = false, all_arcs_in = true;
    for (NodeId v : f.members()) {
      if (t.contains(v)) any_in = true;
      auto sp = s.parent(v);
      if (!sp) continue;  // the sink
      if (!t.contains(v) || t.parent(v) != sp) all_arcs_in = false;
    }
    if (any_in && !all_arcs_in) return false;
  }
  return true;
}

enum class StabilityNotion {
  /// Every node sits on its best valid choice; nodes outside the sink
  /// component have no valid choice at all.
  kEquilibrium,
  /// Only tree arcs are constrained; outside nodes are unconstrained.
  kTreeLiteral,
};

struct SearchOptions {
  StabilityNotion notion = StabilityNotion::kEquilibrium;
  /// Only configurations whose sink component spans every node.
  bool spanning_only = false;
  /// Nodes that must belong to the sink component.
  std::vector<NodeId> required;
  /// Maximum number of explored search states.
  std::uint64_t budget = 50'000'000;
};

namespace detail {

/// Backtracking over choice functions (each node: one out-neighbour or
/// none), pruned as soon as a node's preference constraint is decided.
///
/// Configurations are canonical: a node with an arc reaches the sink, so
/// each result is determined by its sink component.
class ConfigSearch {
 public:
  using Visitor = std::function<bool(const RoutingGraph&)>;

  ConfigSearch(const Network& net, SearchOptions opts)
      : net_(net), opts_(std::move(opts)), n_(net.size()), choice_(n_, kUnassigned),
        status_(n_, Status::kUnknown), required_(n_, false) {
    for (NodeId v : opts_.required) required_.at(v) = true;
    // Assign nodes near the sink first so statuses resolve early.
    std::vector<std::size_t> dist(n_, static_cast<std::size_t>(-1));
    std::vector<std::vector<NodeId>> in(n_);
    for (NodeId v = 0; v < n_; ++v) {
      for (NodeId w : net_.prefs(v)) in[w].push_back(v);
    }
    std::deque<NodeId> q{net_.sink()};
    dist[net_.sink()] = 0;
    while (!q.empty()) {
      NodeId w = q.front();
      q.pop_front();
      for (NodeId v : in[w]) {
        if (dist[v] == static_cast<std::size_t>(-1)) {
          dist[v] = dist[w] + 1;
          q.push_back(v);
        }
      }
    }
    for (NodeId v = 0; v < n_; ++v) {
      if (v != net_.sink()) order_.push_back(v);
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](NodeId a, NodeId b) { return dist[a] < dist[b]; });
  }

  /// Calls visit for every configuration passing the notion; stops early
  /// when visit returns false. Throws BudgetExceeded.
  void run(const Visitor& visit) {
    visit_ = &visit;
    stopped_ = false;
    recurse(0);
  }

  /// Prune branches whose sink component cannot reach this size.
  void set_min_size(std::size_t s) { min_size_ = s; }
  std::uint64_t steps() const { return steps_; }

 private:
  static constexpr int kUnassigned = -2;
  static constexpr int kNone = -1;
  enum class Status : std::uint8_t { kUnknown, kEmpty, kReaches };

  void refresh_status() {
    std::fill(status_.begin(), status_.end(), Status::kUnknown);
    std::fill(done_.begin(), done_.end(), 0);
    status_[net_.sink()] = Status::kReaches;
    done_[net_.sink()] = 1;
    for (NodeId s = 0; s < n_; ++s) {
      if (done_[s]) continue;
      walk_.clear();
      NodeId cur = s;
      Status result;
      while (true) {
        if (done_[cur]) {
          result = status_[cur];
          break;
        }
        if (on_walk_[cur]) {
          result = Status::kEmpty;  // closed a cycle
          break;
        }
        on_walk_[cur] = 1;
        walk_.push_back(cur);
        int c = choice_[cur];
        if (c == kUnassigned) {
          result = Status::kUnknown;
          break;
        }
        if (c == kNone) {
          result = Status::kEmpty;
          break;
        }
        cur = net_.prefs(cur)[static_cast<std::size_t>(c)];
      }
      for (NodeId x : walk_) {
        status_[x] = result;
        on_walk_[x] = 0;
        done_[x] = 1;
      }
    }
  }

  /// x is valid for v under the current (fully known) walk from x.
  bool valid(NodeId v, NodeId x) const {
    NodeId cur = x;
    while (true) {
      if (net_.filters_out(v, cur)) return false;
      if (cur == net_.sink()) return true;
      cur = net_.prefs(cur)[static_cast<std::size_t>(choice_[cur])];
    }
  }

  /// False when node v's constraint is already violated.
  bool consistent(NodeId v) const {
    int c = choice_[v];
    if (c == kUnassigned) return true;
    if (required_[v] && status_[v] == Status::kEmpty) return false;
    auto prefs = net_.prefs(v);
    if (c == kNone) {
      if (opts_.notion == StabilityNotion::kTreeLiteral) return true;
      for (NodeId x : prefs) {
        if (status_[x] == Status::kReaches && valid(v, x)) return false;
      }
      return true;
    }
    NodeId w = prefs[static_cast<std::size_t>(c)];
    if (status_[w] == Status::kEmpty) return false;
    if (status_[w] == Status::kReaches && !valid(v, w)) return false;
    for (int j = 0; j < c; ++j) {
      NodeId x = prefs[static_cast<std::size_t>(j)];
      if (status_[x] == Status::kReaches && valid(v, x)) return false;
    }
    return true;
  }

  bool feasible() {
    refresh_status();
    std::size_t upper = 0;
    for (NodeId v = 0; v < n_; ++v) {
      if (status_[v] != Status::kEmpty) ++upper;
    }
    if (upper < min_size_) return false;
    if (opts_.spanning_only && upper < n_) return false;
    for (NodeId v = 0; v < n_; ++v) {
      if (v != net_.sink() && !consistent(v)) return false;
    }
    return true;
  }

  void recurse(std::size_t depth) {
    if (stopped_) return;
    if (++steps_ > opts_.budget) {
      throw BudgetExceeded("configuration search exceeded budget of " +
                           std::to_string(opts_.budget) + " states");
    }
    if (depth == order_.size()) {
      RoutingGraph g(n_);
      for (NodeId v = 0; v < n_; ++v) {
        if (choice_[v] >= 0) g.set(v, net_.prefs(v)[static_cast<std::size_t>(choice_[v])]);
      }
      if (!(*visit_)(g)) stopped_ = true;
      return;
    }
    NodeId v = order_[depth];
    const int deg = static_cast<int>(net_.prefs(v).size());
    const bool allow_none = !opts_.spanning_only && !required_[v];
    for (int c = 0; c < deg + (allow_none ? 1 : 0) && !stopped_; ++c) {
      choice_[v] = c < deg ? c : kNone;
      if (feasible()) recurse(depth + 1);
    }
    choice_[v] = kUnassigned;
  }

  const Network& net_;
  SearchOptions opts_;
  std::size_t n_;
  std::vector<int> choice_;
  std::vector<Status> status_;
  std::vector<char> done_ = std::vector<char>(n_, 0);
  std::vector<char> on_walk_ = std::vector<char>(n_, 0);
  std::vector<NodeId> walk_;
  std::vector<bool> required_;
  std::vector<NodeId> order_;
  const Visitor* visit_ = nullptr;
  bool stopped_ = false;
  std::size_t min_size_ = 0;
  std::uint64_t steps_ = 0;
};

/// Rank vector used for canonical ordering: 0 for no arc, k for a k-th choice.
inline std::vector<std::uint32_t> rank_vector(const Network& net, const RoutingGraph& g) {
  std::vector<std::uint32_t> out(net.size(), 0);
  for (auto [v, w] : g.arcs()) out[v] = net.rank(v, w);
  return out;
}

}  // namespace detail

/// Visits every configuration satisfying the options (unordered).
inline void search_stable_configurations(const Network& net, const SearchOptions& opts,
                                         const std::function<bool(const RoutingGraph&)>& visit) {
  detail::ConfigSearch search(net, opts);
  search.run(visit);
}

inline std::optional<RoutingGraph> find_stable_configuration(const Network& net,
                                                             const SearchOptions& opts) {
  std::optional<RoutingGraph> found;
  search_stable_configurations(net, opts, [&](const RoutingGraph& g) {
    found = g;
    return false;
  });
  return found;
}

/// Every equilibrium routing graph, in lexicographic order of
/// (node, choice rank) with "no arc" first.
inline std::vector<RoutingGraph> enumerate_equilibria(const Network& net,
                                                      std::uint64_t budget = 50'000'000) {
  validate_network(net);
  SearchOptions opts;
  opts.notion = StabilityNotion::kEquilibrium;
  opts.budget = budget;
  std::vector<RoutingGraph> out;
  search_stable_configurations(net, opts, [&](const RoutingGraph& g) {
    out.push_back(g);
    return true;
  });
  std::sort(out.begin(), out.end(), [&](const RoutingGraph& a, const RoutingGraph& b) {
    return detail::rank_vector(net, a) < detail::rank_vector(net, b);
  });
  return out;
}

/// Largest sink component over all equilibria; the bare sink when there is
/// no equilibrium with a larger one.
inline StableTreeReport max_stable_tree(const Network& net, std::uint64_t budget = 50'000'000) {
  StableTreeReport best;
  best.tree = RoutingGraph(net.size());
  best.size = 1;
  for (const auto& g : enumerate_equilibria(net, budget)) {
    Tree t = sink_component(g, net.sink());
    if (t.size() > best.size) {
      best.tree = t.arcs();
      best.size = t.size();
    }
  }
  return best;
}

/// Largest tree that is stable in the tree-only sense (outside nodes
/// unconstrained), by branch and bound.
inline StableTreeReport max_stable_subtree(const Network& net, std::uint64_t budget = 50'000'000) {
  validate_network(net);
  SearchOptions opts;
  opts.notion = StabilityNotion::kTreeLiteral;
  opts.budget = budget;
  detail::ConfigSearch search(net, opts);
  StableTreeReport best;
  best.tree = RoutingGraph(net.size());
  best.size = 1;
  search.set_min_size(2);
  search.run([&](const RoutingGraph& g) {
    Tree t = sink_component(g, net.sink());
    if (t.size() > best.size) {
      best.tree = t.arcs();
      best.size = t.size();
      search.set_min_size(best.size + 1);
    }
    return best.size < net.size();
  });
  best.external_blocking = is_stable_tree(net, Tree::from_arcs(net.sink(), best.tree)).external_blocking;
  return best;
}

}  // namespace nexthop

#endif  // NEXTHOP_ANALYSIS_HPP
