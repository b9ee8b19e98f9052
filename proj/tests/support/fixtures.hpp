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

// Hand-checked three-node networks. Node 0 is the sink throughout.

#ifndef NEXTHOP_TESTS_FIXTURES_HPP
#define NEXTHOP_TESTS_FIXTURES_HPP

#include "nexthop/model.hpp"

namespace nexthop::testing {

// a = 1, b = 2.
constexpr NodeId kA = 1, kB = 2;
// u = 1, w = 2.
constexpr NodeId kU = 1, kW = 2;

/// a prefers r then b; b prefers a then r; no filters.
inline Network tri() { return Network(3, 0, {{}, {0, 2}, {1, 0}}, {{}, {}, {}}); }

/// u and w each prefer the other to r; no filters. No equilibrium.
inline Network nogood() { return Network(3, 0, {{}, {2, 0}, {1, 0}}, {{}, {}, {}}); }

/// nogood with self filters.
inline Network notme2() { return Network(3, 0, {{}, {2, 0}, {1, 0}}, {{}, {1}, {2}}); }

/// Both non-sink nodes routing straight to the sink.
inline RoutingGraph direct_to_sink(std::size_t n = 3) {
  RoutingGraph g(n);
  for (NodeId v = 1; v < n; ++v) g.set(v, 0);
  return g;
}

}  // namespace nexthop::testing

#endif  // NEXTHOP_TESTS_FIXTURES_HPP
