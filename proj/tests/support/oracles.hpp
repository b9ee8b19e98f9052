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

// Straight-from-the-definition reference implementations. They share only
// the Network type with the library and favour obviousness over speed.

#ifndef NEXTHOP_TESTS_ORACLES_HPP
#define NEXTHOP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "nexthop/model.hpp"

namespace nexthop::testing {

/// choice[v] = next hop or -1.
using Choice = std::vector<int>;

/// Path of v under the choice function: v, next, ..., sink; empty when the
/// walk never reaches the sink.
inline std::vector<NodeId> oracle_path(const Network& net, const Choice& c, NodeId v) {
  std::vector<NodeId> p{v};
  NodeId cur = v;
  for (std::size_t i = 0; i <= net.size(); ++i) {
    if (cur == net.sink()) return p;
    if (c[cur] < 0) return {};
    cur = static_cast<NodeId>(c[cur]);
    p.push_back(cur);
  }
  return {};
}

inline bool oracle_filters(const Network& net, NodeId v, NodeId x) {
  auto f = net.filters(v);
  return std::find(f.begin(), f.end(), x) != f.end();
}

/// v's favourite neighbour whose path is non-empty and free of v's filters.
inline int oracle_best(const Network& net, const std::vector<std::vector<NodeId>>& paths, NodeId v) {
  for (NodeId w : net.prefs(v)) {
    if (paths[w].empty()) continue;
    bool clean = true;
    for (NodeId x : paths[w]) clean = clean && !oracle_filters(net, v, x);
    if (clean) return static_cast<int>(w);
  }
  return -1;
}

/// Calls f on every choice function (each non-sink node: a neighbour or -1).
template <class F>
void for_each_choice(const Network& net, F&& f) {
  const std::size_t n = net.size();
  Choice c(n, -1);
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    for (NodeId v = 0; v < n; ++v) {
      c[v] = digit[v] == 0 ? -1 : static_cast<int>(net.prefs(v)[digit[v] - 1]);
    }
    f(c);
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (++digit[v] <= net.prefs(v).size()) break;
      digit[v] = 0;
    }
    if (v == n) return;
  }
}

inline bool oracle_is_equilibrium(const Network& net, const Choice& c) {
  std::vector<std::vector<NodeId>> paths(net.size());
  for (NodeId v = 0; v < net.size(); ++v) paths[v] = oracle_path(net, c, v);
  for (NodeId v = 0; v < net.size(); ++v) {
    if (v == net.sink()) continue;
    if (oracle_best(net, paths, v) != c[v]) return false;
  }
  return true;
}

inline std::vector<Choice> oracle_equilibria(const Network& net) {
  std::vector<Choice> out;
  for_each_choice(net, [&](const Choice& c) {
    if (oracle_is_equilibrium(net, c)) out.push_back(c);
  });
  return out;
}

inline std::size_t oracle_component_size(const Network& net, const Choice& c) {
  std::size_t k = 0;
  for (NodeId v = 0; v < net.size(); ++v) k += !oracle_path(net, c, v).empty();
  return k;
}

/// Largest sink component over all equilibria; 1 if there is none.
inline std::size_t oracle_max_stable_tree(const Network& net) {
  std::size_t best = 1;
  for (const auto& c : oracle_equilibria(net)) best = std::max(best, oracle_component_size(net, c));
  return best;
}

/// Tree given as choice function where every node with an arc reaches the
/// sink: each tree node's parent is valid and no valid neighbour beats it.
inline bool oracle_tree_stable(const Network& net, const Choice& c) {
  std::vector<std::vector<NodeId>> paths(net.size());
  for (NodeId v = 0; v < net.size(); ++v) paths[v] = oracle_path(net, c, v);
  for (NodeId v = 0; v < net.size(); ++v) {
    if (v == net.sink() || c[v] < 0) continue;
    if (oracle_best(net, paths, v) != c[v]) return false;
  }
  return true;
}

/// x lies in v's O-subtree of the spanning tree `parent`: its tree path
/// reaches v without leaving O.
inline bool oracle_in_subtree(const std::vector<int>& parent, const std::vector<bool>& O, NodeId x,
                              NodeId v) {
  NodeId cur = x;
  for (std::size_t i = 0; i <= parent.size(); ++i) {
    if (!O[cur]) return false;
    if (cur == v) return true;
    if (parent[cur] < 0) return false;
    cur = static_cast<NodeId>(parent[cur]);
  }
  return false;
}

inline bool oracle_strongly_stable(const Network& net, const std::vector<int>& parent,
                                   const std::vector<bool>& O) {
  for (NodeId v = 0; v < net.size(); ++v) {
    if (!O[v] || v == net.sink()) continue;
    for (NodeId x : net.prefs(v)) {
      if (oracle_in_subtree(parent, O, x, v)) continue;
      if (static_cast<int>(x) != parent[v]) return false;
      break;
    }
  }
  return true;
}

/// Every O-forest component either keeps all its arcs inside T (tparent)
/// or has no node in T.
inline bool oracle_skeleton(const std::vector<int>& parent, const std::vector<int>& tparent,
                            const std::vector<bool>& in_t, const std::vector<bool>& O) {
  const std::size_t n = parent.size();
  for (NodeId root = 0; root < n; ++root) {
    if (!O[root]) continue;
    if (parent[root] >= 0 && O[static_cast<NodeId>(parent[root])]) continue;
    bool all_arcs = true, meets = false;
    for (NodeId x = 0; x < n; ++x) {
      if (!oracle_in_subtree(parent, O, x, root)) continue;
      meets = meets || in_t[x];
      if (parent[x] >= 0 && tparent[x] != parent[x]) all_arcs = false;
    }
    if (!all_arcs && meets) return false;
  }
  return true;
}

inline std::vector<int> to_parent(const RoutingGraph& g) {
  std::vector<int> p(g.size(), -1);
  for (auto [v, w] : g.arcs()) p[v] = static_cast<int>(w);
  return p;
}

inline std::vector<bool> to_mask(const NodeSet& s) {
  std::vector<bool> m(s.universe(), false);
  for (NodeId v : s.members()) m[v] = true;
  return m;
}

}  // namespace nexthop::testing

#endif  // NEXTHOP_TESTS_ORACLES_HPP
