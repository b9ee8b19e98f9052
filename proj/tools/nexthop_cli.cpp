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

// nexthop: command-line driver.
//
// Exit codes: 0 success (stop condition met, tree stable, equilibrium found),
// 2 condition not met, 3 usage or validation error, 4 I/O error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nexthop/nexthop.hpp"

namespace {

using namespace nexthop;

constexpr int kOk = 0;
constexpr int kUnmet = 2;
constexpr int kUsage = 3;
constexpr int kIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void spill(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  try {
    write_file(path, text);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NEXTHOP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("NEXTHOP_SEED", "not an unsigned integer");
    }
  }
  return 1;
}

struct RunConfig {
  std::string instance;
  std::string scheduler = "random";
  std::string replay;
  std::string adversary = "stay";
  std::uint64_t seed = 1;
  int max_rounds = 0;
  std::string stop = "delivered";
  std::string trace_out;
  std::string schedule_out;
};

AdversaryPolicy parse_policy(const std::string& s) {
  if (s == "stay") return AdversaryPolicy::stay();
  if (s == "min-id") return AdversaryPolicy::min_id();
  if (s == "max-id") return AdversaryPolicy::max_id();
  throw CLI::ValidationError("--adversary", "unknown policy " + s);
}

template <Scheduler S>
RunResult drive(const Instance& inst, S& sched, const RunConfig& cfg) {
  StopCondition stop = cfg.stop == "delivered"     ? StopCondition::kAllDelivered
                       : cfg.stop == "equilibrium" ? StopCondition::kEquilibrium
                                                   : StopCondition::kRounds;
  int max_rounds = cfg.max_rounds > 0 ? cfg.max_rounds : static_cast<int>(4 * inst.net.size());
  return run(EngineState(inst.net, inst.initial), sched, max_rounds, stop, parse_policy(cfg.adversary));
}

int cmd_run(const RunConfig& cfg) {
  Instance inst = parse_instance(slurp(cfg.instance));
  validate_network(inst.net);
  RunResult res;
  if (cfg.scheduler == "random") {
    RandomScheduler s(cfg.seed);
    res = drive(inst, s, cfg);
  } else if (cfg.scheduler == "coordinate") {
    CoordinateScheduler s(inst.net);
    res = drive(inst, s, cfg);
  } else if (cfg.scheduler == "fair-stabilise") {
    FairStabiliseScheduler s(inst.net);
    res = drive(inst, s, cfg);
  } else {
    if (cfg.replay.empty()) throw CLI::ValidationError("--replay", "required with --scheduler replay");
    ReplayScheduler s(slurp(cfg.replay));
    res = drive(inst, s, cfg);
  }

  const auto& st = res.state;
  if (!cfg.trace_out.empty()) spill(cfg.trace_out, join_lines(st.trace()));
  if (!cfg.schedule_out.empty()) spill(cfg.schedule_out, join_lines(schedule_records(st.trace())));

  std::ostringstream os;
  os << "delivered " << st.delivered_count() << '/' << st.packets().size();
  if (res.all_delivered_round) {
    os << " by round " << *res.all_delivered_round;
  } else {
    os << " after round " << st.round();
  }
  os << "; equilibrium: ";
  if (res.equilibrium_round) {
    os << "round " << *res.equilibrium_round;
  } else {
    os << "no";
  }
  os << "\nrounds: " << res.rounds << "\nper-round:";
  for (auto d : res.delivered_per_round) os << ' ' << d;
  os << "\nimperfect rounds: " << res.imperfect_rounds << '\n';
  std::cout << os.str();
  return res.stop_reached ? kOk : kUnmet;
}

int cmd_gen_gadget(const std::string& cnf, std::size_t padding, const std::string& out,
                   std::string labels_out) {
  CnfFormula f = parse_formula(slurp(cnf));
  GadgetNetwork g = build_reduction(f, padding);
  if (labels_out.empty() && !out.empty() && out != "-") labels_out = out + ".labels";
  spill(out, format_instance(g.net));
  if (!labels_out.empty()) spill(labels_out, g.label_sidecar());
  std::cerr << "gadget: N=" << g.num_vars << " M=" << g.num_clauses << " L=" << g.padding
            << " nodes=" << g.net.size() << " core=" << g.core_size()
            << " implied-epsilon=" << g.implied_epsilon() << '\n';
  return kOk;
}

std::string kind_name(StableTreeReport::Violation::Kind k) {
  return k == StableTreeReport::Violation::Kind::kInvalidParent ? "invalid-parent" : "prefers-other";
}

std::string report_lines(const std::string& tag, const StableTreeReport& rep) {
  std::ostringstream os;
  os << tag << " | tree=" << format_arcs(rep.tree) << " size=" << rep.size
     << " stable=" << (rep.stable() ? "yes" : "no") << '\n';
  if (rep.witness_violation) {
    os << tag << " | violation node=" << rep.witness_violation->node
       << " neighbor=" << rep.witness_violation->neighbor
       << " kind=" << kind_name(rep.witness_violation->kind) << '\n';
  }
  os << tag << " | external-blocking={";
  for (std::size_t i = 0; i < rep.external_blocking.size(); ++i) {
    os << (i ? "," : "") << rep.external_blocking[i];
  }
  os << "}\n";
  return os.str();
}

RoutingGraph load_arcs(const std::string& arcs, const std::string& file, std::size_t n) {
  return parse_arcs(file.empty() ? arcs : slurp(file), n);
}

int cmd_check_stable(const std::string& instance, const std::string& arcs, const std::string& file) {
  Instance inst = parse_instance(slurp(instance));
  validate_network(inst.net);
  RoutingGraph g = load_arcs(arcs, file, inst.net.size());
  Tree t = Tree::from_arcs(inst.net.sink(), g);
  StableTreeReport rep = is_stable_tree(inst.net, t);
  std::cout << report_lines("check", rep);
  return rep.stable() ? kOk : kUnmet;
}

int cmd_max_stable_tree(const std::string& instance, const std::string& notion, std::uint64_t budget) {
  Instance inst = parse_instance(slurp(instance));
  StableTreeReport rep =
      notion == "equilibrium" ? max_stable_tree(inst.net, budget) : max_stable_subtree(inst.net, budget);
  if (notion == "equilibrium") {
    rep.external_blocking = is_stable_tree(inst.net, Tree::from_arcs(inst.net.sink(), rep.tree)).external_blocking;
  }
  std::cout << report_lines("max-stable-tree", rep);
  return rep.size == inst.net.size() ? kOk : kUnmet;
}

int cmd_enumerate(const std::string& instance, std::uint64_t budget) {
  Instance inst = parse_instance(slurp(instance));
  auto eqs = enumerate_equilibria(inst.net, budget);
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    std::cout << "equilibrium | " << k << " graph=" << format_arcs(eqs[k])
              << " size=" << sink_component(eqs[k], inst.net.sink()).size() << '\n';
  }
  std::cout << "equilibria | count=" << eqs.size() << '\n';
  return eqs.empty() ? kUnmet : kOk;
}

struct DotConfig {
  std::string instance;
  std::string graph = "initial";
  std::string arcs;
  std::string trace;
  int round = -1;
  std::string labels;
  bool show_network = false;
  std::string out;
};

int cmd_export_dot(const DotConfig& cfg) {
  Instance inst = parse_instance(slurp(cfg.instance));
  const std::size_t n = inst.net.size();
  RoutingGraph g(n);
  if (!cfg.trace.empty()) {
    g = routing_graph_from_trace(inst.initial, slurp(cfg.trace),
                                 cfg.round < 0 ? std::numeric_limits<int>::max() : cfg.round);
  } else if (!cfg.arcs.empty()) {
    g = parse_arcs(cfg.arcs, n);
  } else if (cfg.graph == "first-choice") {
    g = RoutingGraph::first_choice(inst.net);
  } else if (cfg.graph == "initial") {
    g = inst.initial;
  }
  for (auto [v, w] : g.arcs()) {
    if (!inst.net.has_arc(v, w)) {
      throw CLI::ValidationError("arcs", std::to_string(v) + "->" + std::to_string(w) + " is not a network arc");
    }
  }
  DotOptions opts;
  opts.show_network = cfg.show_network;
  if (!cfg.labels.empty()) opts.labels = parse_labels(slurp(cfg.labels), n);
  spill(cfg.out, export_dot(inst.net, g, opts));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Next-hop routing dynamics simulator"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 2 condition not met, 3 usage/validation error, 4 I/O error.\n"
             "NEXTHOP_SEED sets the default --seed.");
  int code = kOk;

  RunConfig rc;
  auto* run_cmd = app.add_subcommand("run", "Simulate rounds and print a delivery summary");
  run_cmd->add_option("instance", rc.instance, "Instance file")->required();
  run_cmd->add_option("--scheduler", rc.scheduler, "random | coordinate | fair-stabilise | replay")
      ->check(CLI::IsMember({"random", "coordinate", "fair-stabilise", "replay"}))
      ->capture_default_str();
  run_cmd->add_option("--replay", rc.replay, "Trace or schedule file to replay");
  run_cmd->add_option("--adversary", rc.adversary, "Packet placement on cycles: stay | min-id | max-id")
      ->check(CLI::IsMember({"stay", "min-id", "max-id"}))
      ->capture_default_str();
  run_cmd->add_option("--seed", rc.seed, "Seed for the random scheduler (default: $NEXTHOP_SEED or 1)");
  run_cmd->add_option("--max-rounds", rc.max_rounds, "Round limit (default 4n)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--stop", rc.stop, "delivered | equilibrium | rounds")
      ->check(CLI::IsMember({"delivered", "equilibrium", "rounds"}))
      ->capture_default_str();
  run_cmd->add_option("--trace", rc.trace_out, "Write the trace here ('-' for stdout)");
  run_cmd->add_option("--schedule-out", rc.schedule_out, "Write the schedule records (replay input) here");

  std::string cnf, gadget_out = "-", labels_out;
  std::size_t padding = 0;
  auto* gen_cmd = app.add_subcommand("gen-gadget", "Build the stable-tree network of a 3-CNF formula");
  gen_cmd->add_option("--cnf", cnf, "DIMACS formula, three literals per clause")->required();
  gen_cmd->add_option("--padding", padding, "Number of padding nodes L")->capture_default_str();
  gen_cmd->add_option("--out", gadget_out, "Instance output ('-' for stdout)")->capture_default_str();
  gen_cmd->add_option("--labels", labels_out, "Label sidecar output (default <out>.labels)");

  std::string chk_instance, chk_arcs, chk_file;
  auto* chk_cmd = app.add_subcommand("check-stable", "Check a tree for stability");
  chk_cmd->add_option("instance", chk_instance, "Instance file")->required();
  auto* arcs_opt = chk_cmd->add_option("--tree", chk_arcs, "Tree arcs, e.g. '{1->2,2->0}'");
  auto* file_opt = chk_cmd->add_option("--tree-file", chk_file, "File holding the tree arcs");
  arcs_opt->excludes(file_opt);

  std::string mst_instance, notion = "equilibrium";
  std::uint64_t budget = 50'000'000;
  auto* mst_cmd = app.add_subcommand("max-stable-tree", "Largest stable tree by exhaustive search");
  mst_cmd->add_option("instance", mst_instance, "Instance file")->required();
  mst_cmd->add_option("--notion", notion,
                      "equilibrium: outside nodes must have no valid choice; tree: tree arcs only")
      ->check(CLI::IsMember({"equilibrium", "tree"}))
      ->capture_default_str();
  mst_cmd->add_option("--budget", budget, "Search state budget")->capture_default_str();

  std::string eq_instance;
  auto* eq_cmd = app.add_subcommand("enumerate-equilibria", "List every equilibrium routing graph");
  eq_cmd->add_option("instance", eq_instance, "Instance file")->required();
  eq_cmd->add_option("--budget", budget, "Search state budget")->capture_default_str();

  DotConfig dc;
  auto* dot_cmd = app.add_subcommand("export-dot", "Render a routing graph as DOT");
  dot_cmd->add_option("instance", dc.instance, "Instance file")->required();
  dot_cmd->add_option("--graph", dc.graph, "initial | first-choice | empty")
      ->check(CLI::IsMember({"initial", "first-choice", "empty"}))
      ->capture_default_str();
  dot_cmd->add_option("--arcs", dc.arcs, "Explicit arcs, e.g. '{1->0,2->1}'");
  dot_cmd->add_option("--trace", dc.trace, "Rebuild the routing graph from this trace");
  dot_cmd->add_option("--round", dc.round, "With --trace: state at the end of this round (default last)");
  dot_cmd->add_option("--labels", dc.labels, "Label sidecar from gen-gadget");
  dot_cmd->add_flag("--show-network", dc.show_network, "Also draw unchosen arcs");
  dot_cmd->add_option("--out", dc.out, "Output file (default stdout)");

  try {
    rc.seed = default_seed();
    app.parse(argc, argv);
    if (*run_cmd) {
      code = cmd_run(rc);
    } else if (*gen_cmd) {
      code = cmd_gen_gadget(cnf, padding, gadget_out, labels_out);
    } else if (*chk_cmd) {
      if (chk_arcs.empty() && chk_file.empty()) throw CLI::ValidationError("--tree", "a tree is required");
      code = cmd_check_stable(chk_instance, chk_arcs, chk_file);
    } else if (*mst_cmd) {
      code = cmd_max_stable_tree(mst_instance, notion, budget);
    } else if (*eq_cmd) {
      code = cmd_enumerate(eq_instance, budget);
    } else if (*dot_cmd) {
      code = cmd_export_dot(dc);
    }
  } catch (const CLI::ParseError& e) {
    int rc_code = app.exit(e);
    return rc_code == 0 ? kOk : kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return code;
}
