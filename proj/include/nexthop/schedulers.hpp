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

// Activation-order generators:
//   RandomScheduler          seeded uniform fair permutations
//   CoordinateScheduler      red/blue coordination for empty filtering lists
//   FairStabiliseScheduler   strongly-stable tree growth for self filters
//   ReplayScheduler          replays recorded schedules from a trace

#ifndef NEXTHOP_SCHEDULERS_HPP
#define NEXTHOP_SCHEDULERS_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nexthop/analysis.hpp"
#include "nexthop/engine.hpp"
#include "nexthop/model.hpp"

namespace nexthop {

/// A scheduler precondition does not hold for this network (e.g. the
/// coordinate scheduler on non-empty filtering lists).
class SchedulerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal guarantee of a scheduler failed while building a schedule.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Random

namespace detail {

/// Unbiased draw from [0, bound); platform independent, unlike
/// std::uniform_int_distribution.
inline std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = gen();
  } while (x > limit);
  return x % bound;
}

}  // namespace detail

inline std::vector<NodeId> random_fair_permutation(const Network& net, std::mt19937_64& gen) {
  std::vector<NodeId> perm;
  for (NodeId v = 0; v < net.size(); ++v) {
    if (v != net.sink()) perm.push_back(v);
  }
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::size_t j = detail::bounded_draw(gen, i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

class RandomScheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed) : gen_(seed) {}

  Schedule next(const EngineState& st) { return {random_fair_permutation(st.net(), gen_), {}}; }
  std::vector<std::string> after_round(const EngineState&) { return {}; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Coordinate

/// Red/blue colouring: red nodes are forced into the sink component, blue
/// nodes out of it.
struct Partition {
  NodeSet red;
  NodeSet blue;
  /// Components whose first-class cycle holds a clear node.
  NodeSet blue_seed;
  /// Order in which nodes joined the red set in the final iteration (sink
  /// excluded).
  std::vector<NodeId> red_order;
};

namespace detail {

/// v ranks some member of `favoured` above every member of `against`.
inline bool prefers_into(const Network& net, NodeId v, const NodeSet& favoured,
                         const NodeSet& against) {
  for (NodeId x : net.prefs(v)) {
    if (favoured.contains(x)) return true;
    if (against.contains(x)) return false;
  }
  return false;
}

}  // namespace detail

/// Red/blue colouring from the clear set. Starting from the first-class
/// components whose cycle holds a clear node as blue, each pass regrows red
/// from the sink: a node turns red while it ranks a red node above every
/// blue node and every still-uncoloured clear node. Leftovers turn blue,
/// and passes repeat until blue stops growing.
inline Partition coordinate(const Network& net, const FirstClassDecomposition& fcd,
                            const NodeSet& clear) {
  if (!net.all_filters_empty()) {
    throw SchedulerError("coordinate requires empty filtering lists");
  }
  const std::size_t n = net.size();
  const NodeId r = net.sink();
  if (!clear.contains(r)) throw std::invalid_argument("coordinate: sink must be clear");

  NodeSet seed(n);
  for (std::size_t j = 1; j < fcd.component_count(); ++j) {
    const auto& cyc = fcd.cycle_of[j];
    if (std::any_of(cyc.begin(), cyc.end(), [&](NodeId c) { return clear.contains(c); })) {
      for (NodeId v : fcd.components[j]) seed.insert(v);
    }
  }

  NodeSet prev_blue = seed;
  while (true) {
    NodeSet blue = prev_blue;
    NodeSet red(n);
    red.insert(r);
    std::vector<NodeId> order;
    NodeSet undecided = set_union(red, blue).complement();
    bool moved = true;
    while (moved) {
      moved = false;
      NodeSet against = set_union(prev_blue, set_intersection(undecided, clear));
      for (NodeId v : undecided.members()) {
        if (detail::prefers_into(net, v, red, against)) {
          undecided.erase(v);
          red.insert(v);
          order.push_back(v);
          moved = true;
          break;
        }
      }
    }
    blue |= undecided;
    if (blue == prev_blue) return Partition{red, blue, seed, order};
    prev_blue = blue;
  }
}

/// Activation order realising a partition:
///   1. each seeded component, around its smallest clear cycle node v: the
///      other members by increasing first-choice distance to v, then v;
///   2. the rest of blue, greedily, each once its best clear neighbour
///      (under the simulated activations so far) is blue;
///   3. red in the order it was coloured.
inline std::vector<NodeId> coordinate_sequence(const Partition& part,
                                               const FirstClassDecomposition& fcd,
                                               const EngineState& state) {
  const Network& net = state.net();
  const std::size_t n = net.size();
  const NodeSet clear = state.clear_set();
  std::vector<NodeId> seq;

  for (std::size_t j = 1; j < fcd.component_count(); ++j) {
    const auto& comp = fcd.components[j];
    if (!part.blue_seed.contains(comp.front())) continue;
    std::optional<NodeId> anchor;
    for (NodeId c : fcd.cycle_of[j]) {
      if (clear.contains(c) && (!anchor || c < *anchor)) anchor = c;
    }
    if (!anchor) throw ContractViolation("seeded component has no clear cycle node");
    std::vector<std::pair<std::size_t, NodeId>> by_dist;
    for (NodeId v : comp) {
      if (v == *anchor) continue;
      std::size_t d = 0;
      NodeId cur = v;
      while (cur != *anchor) {
        cur = *net.first_choice(cur);
        ++d;
      }
      by_dist.emplace_back(d, v);
    }
    std::sort(by_dist.begin(), by_dist.end());
    for (auto [d, v] : by_dist) seq.push_back(v);
    seq.push_back(*anchor);
  }

  EngineState sim = state;
  sim.clear_trace();
  for (NodeId v : seq) sim.activate(v);

  std::vector<NodeId> pending = set_difference(part.blue, part.blue_seed).members();
  while (!pending.empty()) {
    auto pick = std::find_if(pending.begin(), pending.end(), [&](NodeId v) {
      auto w = sim.best_valid_choice(v);
      return w && part.blue.contains(*w);
    });
    if (pick == pending.end()) {
      pick = std::find_if(pending.begin(), pending.end(),
                          [&](NodeId v) { return !sim.best_valid_choice(v).has_value(); });
    }
    if (pick == pending.end()) {
      throw ContractViolation("blue ordering stalled: every pending node's best clear neighbour is red");
    }
    sim.activate(*pick);
    seq.push_back(*pick);
    pending.erase(pick);
  }

  seq.insert(seq.end(), part.red_order.begin(), part.red_order.end());
  if (seq.size() != n - 1) throw ContractViolation("coordinate sequence is not fair");
  return seq;
}

class CoordinateScheduler {
 public:
  explicit CoordinateScheduler(const Network& net) : fcd_(first_class_decomposition(net)) {
    if (!net.all_filters_empty()) {
      throw SchedulerError("coordinate scheduler requires empty filtering lists");
    }
  }

  Schedule next(const EngineState& st) {
    Partition part = coordinate(st.net(), fcd_, st.clear_set());
    Schedule s{coordinate_sequence(part, fcd_, st), {}};
    s.notes.push_back("coordinate R=" + format_set(part.red) + " B=" + format_set(part.blue) +
                      " B0=" + format_set(part.blue_seed));
    history_.push_back(std::move(part));
    return s;
  }

  std::vector<std::string> after_round(const EngineState&) { return {}; }

  const FirstClassDecomposition& decomposition() const { return fcd_; }
  /// One partition per scheduled round.
  const std::vector<Partition>& history() const { return history_; }

 private:
  FirstClassDecomposition fcd_;
  std::vector<Partition> history_;
};

// ---------------------------------------------------------------------------
// Fair-Stabilise

/// Non-sink members of U by (tree depth, id).
inline std::vector<NodeId> bfs_order(const NodeSet& U, const Tree& tree) {
  std::vector<std::pair<std::size_t, NodeId>> keyed;
  for (NodeId v : U.members()) {
    if (v != tree.sink()) keyed.emplace_back(tree.depth(v), v);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<NodeId> out;
  out.reserve(keyed.size());
  for (auto [d, v] : keyed) out.push_back(v);
  return out;
}

inline std::vector<NodeId> reverse_bfs_order(const NodeSet& U, const Tree& tree) {
  auto out = bfs_order(U, tree);
  std::reverse(out.begin(), out.end());
  return out;
}

/// BFS in-arborescence of the all-choice graph; among equally short
/// options a node takes its best-ranked one.
inline Tree shortest_path_tree(const Network& net) {
  const std::size_t n = net.size();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, kInf);
  std::vector<std::vector<NodeId>> in(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : net.prefs(v)) in[w].push_back(v);
  }
  std::deque<NodeId> q{net.sink()};
  dist[net.sink()] = 0;
  while (!q.empty()) {
    NodeId w = q.front();
    q.pop_front();
    for (NodeId v : in[w]) {
      if (dist[v] == kInf) {
        dist[v] = dist[w] + 1;
        q.push_back(v);
      }
    }
  }
  std::vector<NodeId> parent(n, net.sink());
  for (NodeId v = 0; v < n; ++v) {
    if (v == net.sink()) continue;
    if (dist[v] == kInf) throw NetworkError(NetworkError::Kind::kUnreachable, "unreachable node");
    for (NodeId w : net.prefs(v)) {
      if (dist[w] + 1 == dist[v]) {
        parent[v] = w;
        break;
      }
    }
  }
  return Tree::spanning(net.sink(), parent);
}

/// Extends strong stability from `stable_on` to every node outside the sink
/// component `sink_tree`. Requires `skeleton` to be a spanning tree that is
/// strongly stable on `stable_on` and a skeleton of `sink_tree`; the result
/// contains `sink_tree` and is strongly stable on stable_on ∪ (V \ V(sink_tree)).
///
/// The outside nodes are re-parented leaf-first (smallest id among current
/// leaves of the outside forest), each to its favourite node outside its own
/// subtree.
inline Tree find_stable(const Tree& sink_tree, const Tree& skeleton, const NodeSet& stable_on,
                        const Network& net) {
  const std::size_t n = net.size();
  if (!skeleton.is_spanning() || !skeleton.is_valid()) {
    throw ContractViolation("find_stable: input tree is not spanning");
  }
  if (!has_strong_stability(net, skeleton, stable_on)) {
    throw ContractViolation("find_stable: input tree is not strongly stable on " + format_set(stable_on));
  }
  if (!is_skeleton(skeleton, sink_tree, stable_on)) {
    throw ContractViolation("find_stable: input tree is not a skeleton of the sink component");
  }

  const NodeSet outside = sink_tree.nodes().complement();
  Tree out = sink_tree;
  for (NodeId v : outside.members()) out.set_parent(v, *skeleton.parent(v));

  // Forest on the outside nodes, frozen at initialisation.
  std::vector<std::size_t> children(n, 0);
  for (NodeId v : outside.members()) {
    NodeId p = *out.parent(v);
    if (outside.contains(p)) ++children[p];
  }
  NodeSet remaining = outside;
  for (std::size_t iter = 0; iter < outside.size(); ++iter) {
    NodeId leaf = 0;
    bool found = false;
    for (NodeId v : remaining.members()) {
      if (children[v] == 0) {
        leaf = v;
        found = true;
        break;
      }
    }
    if (!found) throw ContractViolation("find_stable: outside forest has no leaf");
    NodeSet sub = q_subtree(out, outside, leaf);
    std::optional<NodeId> target;
    for (NodeId x : net.prefs(leaf)) {
      if (!sub.contains(x)) {
        target = x;
        break;
      }
    }
    if (!target) throw ContractViolation("find_stable: no candidate outside the subtree");
    NodeId old_parent = *out.parent(leaf);
    if (outside.contains(old_parent) && remaining.contains(old_parent)) --children[old_parent];
    out.set_parent(leaf, *target);
    remaining.erase(leaf);
    if (!out.is_valid()) {
      throw ContractViolation("find_stable: re-pointing " + std::to_string(leaf) + " broke the tree");
    }
  }
  return out;
}

/// Per-round record kept by FairStabiliseScheduler.
struct StabiliseRound {
  int round = 0;
  /// 𝕆 before the round (after the previous promotion).
  NodeSet stable_before;
  /// Nodes opaque at the start of the round.
  NodeSet opaque;
  /// 𝕆 after absorbing the opaque nodes (the BFS block).
  NodeSet stable_scheduled;
  /// Spanning tree used to order the round (before promotion).
  Tree tree;
  std::size_t bfs_block = 0;
  std::optional<NodeId> promoted;
  /// 𝕆 at the end of the round.
  NodeSet stable_after;
};

/// Grows a set 𝕆 of nodes on which a spanning tree S is strongly stable.
/// Each round: S := find_stable(sink component, S, 𝕆); 𝕆 absorbs the opaque
/// nodes; activate 𝕆 in BFS order of S, then the rest in reverse BFS order;
/// finally the first node of the reverse block joins 𝕆 with the arc it
/// chose.
class FairStabiliseScheduler {
 public:
  explicit FairStabiliseScheduler(const Network& net)
      : tree_(shortest_path_tree(net)), stable_(net.size()) {
    if (!net.all_filters_self()) {
      throw SchedulerError("fair-stabilise scheduler requires every filtering list to be {self}");
    }
  }

  Schedule next(const EngineState& st) {
    const Network& net = st.net();
    StabiliseRound rec;
    rec.round = st.round() + 1;
    rec.stable_before = stable_;
    rec.opaque = st.opaque_set();

    Tree sink_tree = sink_component(st.rg(), net.sink());
    tree_ = find_stable(sink_tree, tree_, stable_, net);
    stable_ |= rec.opaque;
    rec.stable_scheduled = stable_;

    Schedule s;
    s.perm = bfs_order(stable_, tree_);
    rec.bfs_block = s.perm.size();
    auto tail = reverse_bfs_order(stable_.complement(), tree_);
    promoted_ = tail.empty() ? std::nullopt : std::optional<NodeId>(tail.front());
    s.perm.insert(s.perm.end(), tail.begin(), tail.end());
    rec.tree = tree_;
    s.notes.push_back("fair-stabilise S=" + format_arcs(tree_.arcs()) + " O=" + format_set(stable_));
    history_.push_back(std::move(rec));
    return s;
  }

  std::vector<std::string> after_round(const EngineState& st) {
    auto& rec = history_.back();
    if (!promoted_) {
      rec.stable_after = stable_;
      return {};
    }
    NodeId v = *promoted_;
    auto w = st.rg().next(v);
    if (!w) throw ContractViolation("promoted node " + std::to_string(v) + " has no arc");
    tree_.set_parent(v, *w);
    if (!tree_.is_valid()) throw ContractViolation("promotion broke the spanning tree");
    stable_.insert(v);
    rec.promoted = v;
    rec.stable_after = stable_;
    promoted_.reset();
    return {"promote v*=" + std::to_string(v) + " -> " + std::to_string(*w) + " O=" + format_set(stable_)};
  }

  const Tree& tree() const { return tree_; }
  const NodeSet& stable_set() const { return stable_; }
  const std::vector<StabiliseRound>& history() const { return history_; }

 private:
  Tree tree_;
  NodeSet stable_;
  std::optional<NodeId> promoted_;
  std::vector<StabiliseRound> history_;
};

// ---------------------------------------------------------------------------
// Replay

/// Keeps only the schedule and note records of a trace; this is the
/// permutation-file format ReplayScheduler reads.
inline std::vector<std::string> schedule_records(const std::vector<std::string>& trace) {
  std::vector<std::string> out;
  for (const auto& line : trace) {
    if (line.find(" | schedule ") != std::string::npos || line.find(" | note ") != std::string::npos) {
      out.push_back(line);
    }
  }
  return out;
}

/// Replays recorded activation orders (and their decision notes) round by
/// round. Accepts either a full trace or its schedule_records().
class ReplayScheduler {
 public:
  explicit ReplayScheduler(std::string_view text) {
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      ++line_no;
      if (line.rfind("round ", 0) != 0) continue;
      auto bar = line.find(" | ");
      if (bar == std::string_view::npos) continue;
      int t = std::stoi(std::string(line.substr(6, bar - 6)));
      std::string_view body = line.substr(bar + 3);
      auto& rec = rounds_[t];
      if (body.rfind("note ", 0) == 0) {
        (rec.perm ? rec.post : rec.pre).emplace_back(body.substr(5));
      } else if (body.rfind("schedule perm=[", 0) == 0) {
        auto close = body.find(']');
        if (close == std::string_view::npos) {
          throw std::invalid_argument("replay: malformed schedule on line " + std::to_string(line_no));
        }
        std::vector<NodeId> perm;
        std::string ids(body.substr(15, close - 15));
        std::size_t i = 0;
        while (i < ids.size()) {
          while (i < ids.size() && ids[i] == ' ') ++i;
          std::size_t j = i;
          while (j < ids.size() && ids[j] != ' ') ++j;
          if (j > i) perm.push_back(static_cast<NodeId>(std::stoul(ids.substr(i, j - i))));
          i = j;
        }
        rec.perm = std::move(perm);
      }
    }
  }

  Schedule next(const EngineState& st) {
    auto it = rounds_.find(st.round() + 1);
    if (it == rounds_.end() || !it->second.perm) {
      throw SchedulerError("replay: no schedule recorded for round " + std::to_string(st.round() + 1));
    }
    return {*it->second.perm, it->second.pre};
  }

  std::vector<std::string> after_round(const EngineState& st) {
    auto it = rounds_.find(st.round());
    return it == rounds_.end() ? std::vector<std::string>{} : it->second.post;
  }

  std::size_t recorded_rounds() const { return rounds_.size(); }

 private:
  struct Recorded {
    std::vector<std::string> pre;
    std::optional<std::vector<NodeId>> perm;
    std::vector<std::string> post;
  };
  std::map<int, Recorded> rounds_;
};

}  // namespace nexthop

#endif  // NEXTHOP_SCHEDULERS_HPP
