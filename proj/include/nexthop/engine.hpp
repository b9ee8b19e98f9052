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

// Round-based protocol dynamics. Each round:
//   1. the adversary repositions packets captured by a cycle last round,
//   2. control plane: every non-sink node activates once, in the given order,
//   3. forwarding plane: every packet moves up to n hops along the routing graph,
//   4. route verification: every node learns its actual path.
//
// Trace records, one per line, in this order within a round:
//   round <t> | note ...                        (scheduler decisions)
//   round <t> | schedule perm=[...]
//   round <t> | place pkt=<id> <v>-><w>
//   round <t> | activate <v> -> <w|none> path=[...]
//   round <t> | forward pkt=<id> <v>-><w>
//   round <t> | delivered pkt=<id>
//   round <t> | verify clear={...}
//   round <t> | note ...                        (post-round scheduler updates)

#ifndef NEXTHOP_ENGINE_HPP
#define NEXTHOP_ENGINE_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nexthop/model.hpp"

namespace nexthop {

/// The activation order handed to run_round() is not a permutation of the
/// non-sink nodes.
class FairnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PacketState {
  std::uint32_t id = 0;
  NodeId origin = 0;
  /// Current node; meaningless once delivered.
  NodeId location = 0;
  std::optional<int> delivered_round;
  /// Cycle that captured the packet in the last forwarding phase, starting
  /// at its smallest node.
  std::optional<std::vector<NodeId>> last_cycle;

  bool delivered() const { return delivered_round.has_value(); }

  friend bool operator==(const PacketState&, const PacketState&) = default;
};

struct AdversaryPolicy {
  enum class Kind { kStay, kMinId, kMaxId, kExhaustive };
  Kind kind = Kind::kStay;
  /// Cap on joint placements produced by kExhaustive.
  std::size_t placement_budget = 4096;

  static AdversaryPolicy stay() { return {Kind::kStay}; }
  static AdversaryPolicy min_id() { return {Kind::kMinId}; }
  static AdversaryPolicy max_id() { return {Kind::kMaxId}; }
  static AdversaryPolicy exhaustive(std::size_t budget = 4096) {
    return {Kind::kExhaustive, budget};
  }
};

class EngineState {
 public:
  EngineState() = default;

  /// Validates the network, installs the initial routing graph (first-choice
  /// graph by default), derives paths by route verification and gives every
  /// non-sink node one packet.
  explicit EngineState(std::shared_ptr<const Network> net,
                       std::optional<RoutingGraph> initial = std::nullopt)
      : net_(std::move(net)) {
    validate_network(*net_);
    const std::size_t n = net_->size();
    rg_ = initial ? *initial : RoutingGraph::first_choice(*net_);
    if (rg_.size() != n) throw std::invalid_argument("initial routing graph has wrong size");
    for (auto [v, w] : rg_.arcs()) {
      if (v == net_->sink() || !net_->has_arc(v, w)) {
        throw std::invalid_argument("initial arc " + std::to_string(v) + "->" +
                                    std::to_string(w) + " is not a network arc");
      }
    }
    paths_.resize(n);
    std::uint32_t id = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (v == net_->sink()) continue;
      packets_.push_back(PacketState{id++, v, v, std::nullopt, std::nullopt});
    }
    verify_routes();
  }

  EngineState(const Network& net, std::optional<RoutingGraph> initial = std::nullopt)
      : EngineState(std::make_shared<const Network>(net), std::move(initial)) {}

  const Network& net() const { return *net_; }
  std::shared_ptr<const Network> shared_net() const { return net_; }
  int round() const noexcept { return round_; }
  const RoutingGraph& rg() const noexcept { return rg_; }
  const RoutingPath& path(NodeId v) const { return paths_.at(v); }
  const std::vector<RoutingPath>& paths() const noexcept { return paths_; }
  const std::vector<PacketState>& packets() const noexcept { return packets_; }
  const std::vector<std::string>& trace() const noexcept { return trace_; }

  bool is_clear(NodeId v) const { return !paths_.at(v).empty(); }

  NodeSet clear_set() const {
    NodeSet s(net_->size());
    for (NodeId v = 0; v < net_->size(); ++v) {
      if (is_clear(v)) s.insert(v);
    }
    return s;
  }

  NodeSet opaque_set() const { return clear_set().complement(); }

  std::size_t delivered_count() const {
    return static_cast<std::size_t>(
        std::count_if(packets_.begin(), packets_.end(), [](const auto& p) { return p.delivered(); }));
  }

  bool all_delivered() const { return delivered_count() == packets_.size(); }

  /// Best valid choice of v: the first out-neighbour w whose path is
  /// non-empty and avoids v's filtering list.
  std::optional<NodeId> best_valid_choice(NodeId v) const {
    for (NodeId w : net_->prefs(v)) {
      const RoutingPath& p = paths_[w];
      if (p.empty()) continue;
      bool ok = std::none_of(p.begin(), p.end(), [&](NodeId x) { return net_->filters_out(v, x); });
      if (ok) return w;
    }
    return std::nullopt;
  }

  /// Procedure Activate: adopt the best valid choice, or drop the arc and
  /// go opaque when there is none.
  void activate(NodeId v) {
    if (v == net_->sink()) throw std::invalid_argument("the sink never activates");
    std::ostringstream os;
    os << prefix() << "activate " << v << " -> ";
    if (auto w = best_valid_choice(v)) {
      rg_.set(v, *w);
      RoutingPath p;
      p.reserve(paths_[*w].size() + 1);
      p.push_back(v);
      p.insert(p.end(), paths_[*w].begin(), paths_[*w].end());
      paths_[v] = std::move(p);
      os << *w;
    } else {
      rg_.clear(v);
      paths_[v].clear();
      os << "none";
    }
    os << " path=" << format_path(paths_[v]);
    trace_.push_back(os.str());
  }

  /// Moves every undelivered packet up to n hops. Packets at a node without
  /// a next hop stay put.
  void forward_packets() {
    const std::size_t n = net_->size();
    const NodeId r = net_->sink();
    for (auto& pkt : packets_) {
      if (pkt.delivered()) continue;
      pkt.last_cycle.reset();
      NodeId loc = pkt.location;
      for (std::size_t hop = 0; hop < n && loc != r; ++hop) {
        auto nxt = rg_.next(loc);
        if (!nxt) break;
        trace_.push_back(prefix() + "forward pkt=" + std::to_string(pkt.id) + " " +
                         std::to_string(loc) + "->" + std::to_string(*nxt));
        loc = *nxt;
      }
      pkt.location = loc;
      if (loc == r) {
        pkt.delivered_round = current_round();
        trace_.push_back(prefix() + "delivered pkt=" + std::to_string(pkt.id));
      } else {
        pkt.last_cycle = cycle_through(loc);
      }
    }
  }

  /// Every node adopts its actual path in the routing graph.
  void verify_routes() {
    for (NodeId v = 0; v < net_->size(); ++v) paths_[v] = actual_path(rg_, net_->sink(), v);
    trace_.push_back(prefix() + "verify clear=" + format_set(clear_set()));
  }

  /// Repositions cycled packets. kExhaustive is rejected here; use
  /// place_cycled_packets_all().
  void place_cycled_packets(const AdversaryPolicy& policy) {
    if (policy.kind == AdversaryPolicy::Kind::kExhaustive) {
      throw std::invalid_argument("exhaustive placement forks the state; use place_cycled_packets_all");
    }
    if (policy.kind == AdversaryPolicy::Kind::kStay) return;
    for (auto& pkt : packets_) {
      if (pkt.delivered() || !pkt.last_cycle) continue;
      const auto& cyc = *pkt.last_cycle;
      NodeId target = policy.kind == AdversaryPolicy::Kind::kMinId
                          ? *std::min_element(cyc.begin(), cyc.end())
                          : *std::max_element(cyc.begin(), cyc.end());
      move_packet(pkt, target);
    }
  }

  /// One successor per joint placement of the cycled packets (every other
  /// policy yields a single successor).
  std::vector<EngineState> place_cycled_packets_all(const AdversaryPolicy& policy) const {
    if (policy.kind != AdversaryPolicy::Kind::kExhaustive) {
      EngineState s = *this;
      s.place_cycled_packets(policy);
      return {std::move(s)};
    }
    std::vector<std::size_t> cycled;
    std::size_t total = 1;
    for (std::size_t i = 0; i < packets_.size(); ++i) {
      const auto& pkt = packets_[i];
      if (pkt.delivered() || !pkt.last_cycle) continue;
      cycled.push_back(i);
      total *= pkt.last_cycle->size();
      if (total > policy.placement_budget) {
        throw BudgetExceeded("exhaustive placement exceeds budget of " +
                             std::to_string(policy.placement_budget));
      }
    }
    std::vector<EngineState> out;
    out.reserve(total);
    std::vector<std::size_t> digit(cycled.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
      EngineState s = *this;
      for (std::size_t j = 0; j < cycled.size(); ++j) {
        auto& pkt = s.packets_[cycled[j]];
        s.move_packet(pkt, (*pkt.last_cycle)[digit[j]]);
      }
      out.push_back(std::move(s));
      for (std::size_t j = 0; j < cycled.size(); ++j) {
        if (++digit[j] < packets_[cycled[j]].last_cycle->size()) break;
        digit[j] = 0;
      }
    }
    return out;
  }

  /// Appends scheduler annotations for the round about to run (or the one
  /// that just ran, for post-round notes).
  void note(const std::string& text, bool for_next_round = true) {
    int t = for_next_round ? round_ + 1 : round_;
    trace_.push_back("round " + std::to_string(t) + " | note " + text);
  }

  /// Executes one full round with the given activation order.
  void run_round(const std::vector<NodeId>& perm,
                 const AdversaryPolicy& policy = AdversaryPolicy::stay()) {
    begin_round(perm);
    place_cycled_packets(policy);
    finish_round(perm);
  }

  /// run_round() split at the adversary step, for callers that fork on
  /// placements: begin_round() logs the schedule, finish_round() activates,
  /// forwards and verifies.
  void begin_round(const std::vector<NodeId>& perm) {
    check_fair(perm);
    if (in_round_) throw std::logic_error("round already in progress");
    in_round_ = true;
    trace_.push_back(prefix() + "schedule perm=" + format_path(perm));
  }

  void finish_round(const std::vector<NodeId>& perm) {
    if (!in_round_) throw std::logic_error("finish_round without begin_round");
    for (NodeId v : perm) activate(v);
    forward_packets();
    verify_routes();
    ++round_;
    in_round_ = false;
  }

  /// Every node is consistent and sits on its best valid choice (no valid
  /// choice means no arc and an empty path).
  bool is_equilibrium() const {
    for (NodeId v = 0; v < net_->size(); ++v) {
      if (v == net_->sink()) continue;
      if (paths_[v] != actual_path(rg_, net_->sink(), v)) return false;
      if (best_valid_choice(v) != rg_.next(v)) return false;
    }
    return true;
  }

  void check_fair(const std::vector<NodeId>& perm) const {
    const std::size_t n = net_->size();
    std::vector<bool> seen(n, false);
    if (perm.size() != n - 1) {
      throw FairnessError("activation order has " + std::to_string(perm.size()) +
                          " entries, expected " + std::to_string(n - 1));
    }
    for (NodeId v : perm) {
      if (v >= n || v == net_->sink() || seen[v]) {
        throw FairnessError("activation order is not a permutation of the non-sink nodes");
      }
      seen[v] = true;
    }
  }

  void clear_trace() { trace_.clear(); }

 private:
  int current_round() const { return round_ + 1; }
  std::string prefix() const {
    return "round " + std::to_string(in_round_ ? round_ + 1 : round_) + " | ";
  }

  void move_packet(PacketState& pkt, NodeId target) {
    if (target == pkt.location) return;
    trace_.push_back("round " + std::to_string(round_ + 1) + " | place pkt=" +
                     std::to_string(pkt.id) + " " + std::to_string(pkt.location) + "->" +
                     std::to_string(target));
    pkt.location = target;
  }

  std::optional<std::vector<NodeId>> cycle_through(NodeId v) const {
    std::vector<NodeId> cyc{v};
    NodeId cur = v;
    for (std::size_t i = 0; i < net_->size(); ++i) {
      auto nxt = rg_.next(cur);
      if (!nxt) return std::nullopt;
      if (*nxt == v) {
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
        return cyc;
      }
      cur = *nxt;
      cyc.push_back(cur);
    }
    return std::nullopt;
  }

  std::shared_ptr<const Network> net_;
  int round_ = 0;
  bool in_round_ = false;
  RoutingGraph rg_;
  std::vector<RoutingPath> paths_;
  std::vector<PacketState> packets_;
  std::vector<std::string> trace_;
};

/// What a scheduler hands the engine for one round.
struct Schedule {
  std::vector<NodeId> perm;
  /// Decision records written to the trace ahead of the round.
  std::vector<std::string> notes;
};

/// A scheduler produces one activation order per round and may update its
/// own state once the round has run.
template <class S>
concept Scheduler = requires(S s, const EngineState& st) {
  { s.next(st) } -> std::convertible_to<Schedule>;
  { s.after_round(st) } -> std::convertible_to<std::vector<std::string>>;
};

enum class StopCondition { kAllDelivered, kEquilibrium, kRounds };

struct RunResult {
  EngineState state;
  int rounds = 0;
  bool stop_reached = false;
  /// delivered_per_round[t-1] = packets delivered during round t.
  std::vector<std::size_t> delivered_per_round;
  /// Rounds that ended with a round-0 packet still undelivered.
  int imperfect_rounds = 0;
  /// First round after which the state was an equilibrium (0 = initially).
  std::optional<int> equilibrium_round;
  /// Round by which every packet was delivered.
  std::optional<int> all_delivered_round;
};

/// Drives rounds until the stop condition holds or max_rounds have run.
/// kRounds always runs exactly max_rounds.
template <Scheduler S>
RunResult run(EngineState state, S& scheduler, int max_rounds, StopCondition stop,
              const AdversaryPolicy& policy = AdversaryPolicy::stay()) {
  RunResult res;
  auto satisfied = [&](const EngineState& st) {
    switch (stop) {
      case StopCondition::kAllDelivered:
        return st.all_delivered();
      case StopCondition::kEquilibrium:
        return st.is_equilibrium();
      case StopCondition::kRounds:
        return false;
    }
    return false;
  };
  if (state.is_equilibrium()) res.equilibrium_round = state.round();
  if (state.all_delivered()) res.all_delivered_round = state.round();
  bool done = satisfied(state);
  while (!done && res.rounds < max_rounds) {
    const std::size_t before = state.delivered_count();
    Schedule sched = scheduler.next(state);
    for (const auto& n : sched.notes) state.note(n);
    state.run_round(sched.perm, policy);
    for (const auto& n : scheduler.after_round(state)) state.note(n, false);
    ++res.rounds;
    res.delivered_per_round.push_back(state.delivered_count() - before);
    if (!state.all_delivered()) ++res.imperfect_rounds;
    if (!res.all_delivered_round && state.all_delivered()) res.all_delivered_round = state.round();
    if (!res.equilibrium_round && state.is_equilibrium()) res.equilibrium_round = state.round();
    done = satisfied(state);
  }
  res.stop_reached = stop == StopCondition::kRounds ? res.rounds == max_rounds : done;
  res.state = std::move(state);
  return res;
}

/// Routing graph at the end of round `upto`, rebuilt from the activate
/// records of a trace.
inline RoutingGraph routing_graph_from_trace(RoutingGraph initial, std::string_view trace, int upto) {
  std::istringstream in{std::string(trace)};
  std::string line;
  while (std::getline(in, line)) {
    int t = 0;
    char bar = 0;
    std::string word;
    std::istringstream ls(line);
    if (!(ls >> word) || word != "round" || !(ls >> t >> bar) || bar != '|') continue;
    if (t > upto) break;
    if (!(ls >> word) || word != "activate") continue;
    NodeId v = 0;
    std::string arrow, target;
    if (!(ls >> v >> arrow >> target) || arrow != "->" || v >= initial.size()) {
      throw std::invalid_argument("malformed activate record: " + line);
    }
    if (target == "none") {
      initial.clear(v);
    } else {
      NodeId w = static_cast<NodeId>(std::stoul(target));
      if (w >= initial.size()) throw std::invalid_argument("activate target out of range: " + line);
      initial.set(v, w);
    }
  }
  return initial;
}

}  // namespace nexthop

#endif  // NEXTHOP_ENGINE_HPP
