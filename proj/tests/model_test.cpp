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

#include "nexthop/model.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

namespace nexthop {
namespace {

using testing::kA;
using testing::kB;
using testing::kU;
using testing::kW;

NetworkError::Kind validation_kind(const Network& net) {
  try {
    validate_network(net);
  } catch (const NetworkError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "network validated";
  return NetworkError::Kind::kTooFewNodes;
}

// Path e->d->c->b->a->r with r=0, a=1, ..., e=5.
Tree path_tree() { return Tree::spanning(0, {0, 0, 1, 2, 3, 4}); }

TEST(NodeSet, BasicOperations) {
  NodeSet s = NodeSet::of(5, {1, 3});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
  EXPECT_FALSE(s.contains(99));
  s.insert(3);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.complement(), NodeSet::of(5, {0, 2, 4}));
  EXPECT_EQ(set_union(s, NodeSet::of(5, {2})), NodeSet::of(5, {1, 2, 3}));
  EXPECT_EQ(set_difference(s, NodeSet::of(5, {1})), NodeSet::of(5, {3}));
  EXPECT_EQ(set_intersection(s, NodeSet::of(5, {3, 4})), NodeSet::of(5, {3}));
  EXPECT_TRUE(NodeSet::of(5, {3}).is_subset_of(s));
  EXPECT_EQ(format_set(s), "{1,3}");
  EXPECT_EQ(format_set(NodeSet(4)), "{}");
}

TEST(Network, TriValidates) {
  Network net = testing::tri();
  EXPECT_NO_THROW(validate_network(net));
  EXPECT_EQ(net.rank(kA, 0), 1u);
  EXPECT_EQ(net.rank(kA, kB), 2u);
  EXPECT_EQ(net.rank(kB, 0), 2u);
  EXPECT_EQ(net.rank(0, kA), 0u);
  EXPECT_TRUE(net.prefers(kB, kA, 0));
  EXPECT_EQ(net.first_choice(kB), kA);
  EXPECT_EQ(net.arc_count(), 4u);
  EXPECT_TRUE(net.all_filters_empty());
  EXPECT_FALSE(net.all_filters_self());
  EXPECT_TRUE(testing::notme2().all_filters_self());
}

TEST(Network, DuplicatePreference) {
  Network net(3, 0, {{}, {0}, {1, 1}}, {{}, {}, {}});
  EXPECT_EQ(validation_kind(net), NetworkError::Kind::kDuplicatePreference);
}

TEST(Network, Unreachable) {
  Network net(2, 0, {{}, {}}, {{}, {}});
  EXPECT_EQ(validation_kind(net), NetworkError::Kind::kUnreachable);
  Network pair(4, 0, {{}, {0}, {3}, {2}}, {{}, {}, {}, {}});
  EXPECT_EQ(validation_kind(pair), NetworkError::Kind::kUnreachable);
}

TEST(Network, SinkOutArcAndSelfPreference) {
  EXPECT_EQ(validation_kind(Network(2, 0, {{1}, {0}}, {{}, {}})), NetworkError::Kind::kSinkOutArc);
  EXPECT_EQ(validation_kind(Network(3, 0, {{}, {1, 0}, {0}}, {{}, {}, {}})),
            NetworkError::Kind::kSelfPreference);
}

TEST(Network, ConstructionRangeErrors) {
  EXPECT_THROW(Network(1, 0, {{}}, {{}}), NetworkError);
  EXPECT_THROW(Network(2, 2, {{}, {0}}, {{}, {}}), NetworkError);
  EXPECT_THROW(Network(2, 0, {{}, {5}}, {{}, {}}), NetworkError);
}

TEST(Network, FiltersAreSortedSets) {
  Network net(3, 0, {{}, {0}, {0}}, {{}, {2, 1, 2}, {}});
  ASSERT_EQ(net.filters(kA).size(), 2u);
  EXPECT_EQ(net.filters(kA)[0], 1u);
  EXPECT_TRUE(net.filters_out(kA, 2));
  EXPECT_FALSE(net.filters_out(kB, 2));
}

TEST(FirstClass, TriSingleComponent) {
  auto fcd = first_class_decomposition(testing::tri());
  ASSERT_EQ(fcd.component_count(), 1u);
  EXPECT_EQ(fcd.components[0], (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(fcd.cycle_of[0], (std::vector<NodeId>{0}));
}

TEST(FirstClass, NogoodTwoComponents) {
  auto fcd = first_class_decomposition(testing::nogood());
  ASSERT_EQ(fcd.component_count(), 2u);
  EXPECT_EQ(fcd.components[0], (std::vector<NodeId>{0}));
  EXPECT_EQ(fcd.components[1], (std::vector<NodeId>{kU, kW}));
  EXPECT_EQ(fcd.cycle_of[1], (std::vector<NodeId>{kU, kW}));
  EXPECT_EQ(fcd.component_of[kW], 1u);
}

TEST(FirstClass, Star) {
  Network star(5, 0, {{}, {0, 2}, {0}, {0, 1}, {0}}, {{}, {}, {}, {}, {}});
  auto fcd = first_class_decomposition(star);
  ASSERT_EQ(fcd.component_count(), 1u);
  EXPECT_EQ(fcd.cycle_of[0], (std::vector<NodeId>{0}));
}

TEST(FirstClass, PartitionProperties) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::draw(gen, 2, 12);
    Network net = testing::random_network(gen, n, testing::FilterMode::kEmpty, 1, 3);
    auto fcd = first_class_decomposition(net);
    std::vector<int> seen(n, 0);
    for (std::size_t j = 0; j < fcd.component_count(); ++j) {
      for (NodeId v : fcd.components[j]) {
        ++seen[v];
        EXPECT_EQ(fcd.component_of[v], j);
        if (v != net.sink()) {
          EXPECT_EQ(fcd.component_of[*net.first_choice(v)], j);
        }
      }
      const auto& cyc = fcd.cycle_of[j];
      if (j == 0) {
        EXPECT_EQ(cyc, std::vector<NodeId>{net.sink()});
        EXPECT_EQ(fcd.component_of[net.sink()], 0u);
        continue;
      }
      ASSERT_GE(cyc.size(), 2u);
      EXPECT_EQ(cyc.front(), *std::min_element(cyc.begin(), cyc.end()));
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        EXPECT_EQ(net.first_choice(cyc[k]), cyc[(k + 1) % cyc.size()]);
      }
    }
    for (NodeId v = 0; v < n; ++v) EXPECT_EQ(seen[v], 1) << "node " << v;
  }
}

TEST(ActualPath, Examples) {
  RoutingGraph g(3);
  g.set(kA, 0);
  g.set(kB, kA);
  EXPECT_EQ(actual_path(g, 0, kB), (RoutingPath{kB, kA, 0}));
  EXPECT_EQ(actual_path(g, 0, 0), (RoutingPath{0}));
  RoutingGraph cyc(3);
  cyc.set(kU, kW);
  cyc.set(kW, kU);
  EXPECT_TRUE(actual_path(cyc, 0, kU).empty());
  RoutingGraph dead(3);
  dead.set(kB, kA);
  EXPECT_TRUE(actual_path(dead, 0, kB).empty());
}

TEST(ActualPath, ArcsFollowRoutingGraph) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::draw(gen, 2, 10);
    Network net = testing::random_network(gen, n, testing::FilterMode::kEmpty);
    RoutingGraph g(n);
    for (NodeId v = 1; v < n; ++v) {
      std::size_t k = testing::draw(gen, 0, net.prefs(v).size());
      if (k > 0) g.set(v, net.prefs(v)[k - 1]);
    }
    for (NodeId v = 0; v < n; ++v) {
      auto p = actual_path(g, 0, v);
      if (p.empty()) continue;
      EXPECT_EQ(p.front(), v);
      EXPECT_EQ(p.back(), 0u);
      for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_EQ(g.next(p[i]), p[i + 1]);
    }
  }
}

TEST(OutPlus, Examples) {
  RoutingGraph g(3);
  g.set(kA, 0);
  g.set(kB, kA);
  EXPECT_EQ(format_arcs(out_plus(g, NodeSet::of(3, {kB}))), "{2->1}");
  EXPECT_EQ(out_plus(g, NodeSet::of(3, {kA, kB})), g);
  EXPECT_EQ(out_plus(g, NodeSet::all(3)), g);
  EXPECT_EQ(out_plus(RoutingGraph(3), NodeSet::all(3)).arc_count(), 0u);
  EXPECT_EQ(format_arcs(induced(g, NodeSet::of(3, {kA, kB}))), "{2->1}");
}

TEST(Tree, FromArcsValidation) {
  RoutingGraph cyc(3);
  cyc.set(kU, kW);
  cyc.set(kW, kU);
  EXPECT_THROW(Tree::from_arcs(0, cyc), std::invalid_argument);
  Tree t = path_tree();
  EXPECT_TRUE(t.is_spanning());
  EXPECT_TRUE(t.is_valid());
  EXPECT_EQ(t.depth(5), 5u);
  EXPECT_EQ(t.path_to_sink(2), (RoutingPath{2, 1, 0}));
}

TEST(Tree, SinkComponent) {
  RoutingGraph g(4);
  g.set(1, 0);
  g.set(2, 3);
  g.set(3, 2);
  Tree t = sink_component(g, 0);
  EXPECT_EQ(t.nodes(), NodeSet::of(4, {0, 1}));
  EXPECT_EQ(t.size(), 2u);
}

TEST(QSubtree, PathCutOff) {
  // Q = {b, c, e}: e hangs below d, which is outside Q.
  Tree t = path_tree();
  EXPECT_EQ(q_subtree(t, NodeSet::of(6, {2, 3, 5}), 2), NodeSet::of(6, {2, 3}));
  EXPECT_EQ(q_subtree(t, NodeSet::of(6, {4}), 4), NodeSet::of(6, {4}));
  EXPECT_EQ(q_subtree(t, NodeSet::all(6), 0), NodeSet::all(6));
  EXPECT_THROW(q_subtree(t, NodeSet::of(6, {1}), 2), std::invalid_argument);
}

TEST(QSubtree, MonotoneInQ) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testing::draw(gen, 2, 10);
    Network net = testing::random_network(gen, n, testing::FilterMode::kEmpty);
    Tree t = testing::random_spanning_tree(gen, net);
    NodeSet q(n), big(n);
    for (NodeId v = 0; v < n; ++v) {
      bool in_q = testing::draw(gen, 0, 1) == 1;
      if (in_q) q.insert(v);
      if (in_q || testing::draw(gen, 0, 1) == 1) big.insert(v);
    }
    for (NodeId v : q.members()) {
      EXPECT_TRUE(q_subtree(t, q, v).is_subset_of(q_subtree(t, big, v)));
    }
  }
}

}  // namespace
}  // namespace nexthop
