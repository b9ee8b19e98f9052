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

#include <gtest/gtest.h>

#include <random>

#include "nexthop/dot.hpp"
#include "nexthop/instance_io.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

namespace nexthop {
namespace {

std::vector<NodeId> vec(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

std::string data(const std::string& name) { return std::string(NEXTHOP_DATA_DIR) + "/" + name; }

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t k = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++k;
  return k;
}

TEST(Instance, SampleFiles) {
  auto nogood = load_instance(data("nogood.inst"));
  EXPECT_EQ(format_arcs(nogood.initial), "{1->0,2->0}");
  EXPECT_EQ(vec(nogood.net.prefs(1)), vec(testing::nogood().prefs(1)));
  auto notme = load_instance(data("notme2.inst"));
  EXPECT_TRUE(notme.net.all_filters_self());
  EXPECT_EQ(notme.initial, RoutingGraph::first_choice(notme.net));
  auto tri = load_instance(data("tri.inst"));
  EXPECT_EQ(tri.net.first_choice(2), 1u);
}

TEST(Instance, RoundTrip) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testing::draw(gen, 2, 12);
    Network net = testing::random_network(gen, n, trial % 2 ? testing::FilterMode::kSelf : testing::FilterMode::kEmpty);
    RoutingGraph init(n);
    for (NodeId v = 1; v < n; ++v) {
      std::size_t k = testing::draw(gen, 0, net.prefs(v).size());
      if (k > 0) init.set(v, net.prefs(v)[k - 1]);
    }
    const std::string text = format_instance(net, &init);
    Instance back = parse_instance(text);
    EXPECT_EQ(back.initial, init);
    EXPECT_EQ(format_instance(back), text);
  }
}

TEST(Instance, CommentsAndBlankLines) {
  auto inst = parse_instance("# header\n\nnodes 2   # two\nsink 0\nprefs 1: 0\n");
  EXPECT_EQ(inst.net.size(), 2u);
  EXPECT_EQ(format_arcs(inst.initial), "{1->0}");
}

TEST(Instance, ParseErrors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  EXPECT_EQ(line_of("nodes 2\nsink 0\nbogus 1: 0\n"), 3u);
  EXPECT_EQ(line_of("sink 0\nprefs 1: 0\n"), 2u);
  EXPECT_EQ(line_of("nodes 2\nsink 0\nprefs 1 0\n"), 3u);
  EXPECT_EQ(line_of("nodes 2\nsink 0\nprefs 5: 0\n"), 3u);
  EXPECT_EQ(line_of("nodes 2\nsink 0\nprefs 1: 0\nprefs 1: 0\n"), 4u);
  EXPECT_EQ(line_of("nodes 2\nsink 0\nprefs 1: x\n"), 3u);
  EXPECT_EQ(line_of("nodes 2\nnodes 3\n"), 2u);
  EXPECT_THROW(parse_instance("nodes 2\n"), ParseError);
  EXPECT_THROW(parse_instance("nodes 3\nsink 0\nprefs 1: 0\nprefs 2: 0\ninit 1: 2\n"), ParseError);
  EXPECT_THROW(load_instance(data("missing.inst")), std::runtime_error);
}

TEST(Arcs, ParseFormatted) {
  RoutingGraph g = parse_arcs("{1->2,2->0}", 3);
  EXPECT_EQ(g.next(1), 2u);
  EXPECT_EQ(g.next(2), 0u);
  EXPECT_EQ(format_arcs(g), "{1->2,2->0}");
  EXPECT_EQ(parse_arcs("{}", 3).arc_count(), 0u);
  EXPECT_EQ(parse_arcs(" 2->1\n1->0 ", 3), parse_arcs("{1->0,2->1}", 3));
  EXPECT_THROW(parse_arcs("{1-2}", 3), ParseError);
  EXPECT_THROW(parse_arcs("{1->7}", 3), ParseError);
  EXPECT_THROW(parse_arcs("{1->0,1->2}", 3), ParseError);
}

TEST(Labels, Sidecar) {
  auto labels = parse_labels("# roles\nlabel 0 r\nlabel 2 d0\n", 3);
  EXPECT_EQ(labels, (std::vector<std::string>{"r", "1", "d0"}));
  EXPECT_THROW(parse_labels("label 9 x\n", 3), ParseError);
  EXPECT_THROW(parse_labels("name 1 x\n", 3), ParseError);
}

TEST(Dot, TriFirstChoice) {
  Network net = testing::tri();
  const std::string dot = export_dot(net, RoutingGraph::first_choice(net));
  EXPECT_EQ(count(dot, " -> "), 2u);
  EXPECT_NE(dot.find("n1 -> n0 [label=\"1\"]"), std::string::npos);
  EXPECT_NE(dot.find("n2 -> n1 [label=\"1\"]"), std::string::npos);
  EXPECT_NE(dot.find("n0 [label=\"0\", shape=doublecircle]"), std::string::npos);
  EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
  EXPECT_EQ(dot, export_dot(net, RoutingGraph::first_choice(net)));
}

TEST(Dot, EmptyGraphAndOptions) {
  Network net = testing::tri();
  const std::string bare = export_dot(net, RoutingGraph(3));
  EXPECT_EQ(count(bare, " -> "), 0u);
  EXPECT_EQ(count(bare, "[label="), 3u);
  DotOptions opts;
  opts.labels = {"r", "a", "b"};
  opts.show_network = true;
  opts.highlight = {2};
  const std::string full = export_dot(net, RoutingGraph(3), opts);
  EXPECT_EQ(count(full, " -> "), 4u);
  EXPECT_EQ(count(full, "style=dotted"), 4u);
  EXPECT_NE(full.find("n2 [label=\"b\", style=dashed]"), std::string::npos);
}

}  // namespace
}  // namespace nexthop
