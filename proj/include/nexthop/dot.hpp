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

#ifndef NEXTHOP_DOT_HPP
#define NEXTHOP_DOT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "nexthop/model.hpp"

namespace nexthop {

struct DotOptions {
  std::string name = "routing";
  /// Optional per-node labels (e.g. gadget roles); ids are used otherwise.
  std::vector<std::string> labels;
  /// Also draw unchosen network arcs, dotted and grey.
  bool show_network = false;
  /// Nodes drawn with a dashed outline (e.g. opaque nodes).
  std::vector<NodeId> highlight;
};

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

/// Routing graph (or tree) as a DOT digraph. Arc labels are the tail's
/// ranking of the head; output depends only on the inputs.
inline std::string export_dot(const Network& net, const RoutingGraph& rg, const DotOptions& opts = {}) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(opts.name) << " {\n";
  os << "  rankdir=BT;\n";
  for (NodeId v = 0; v < net.size(); ++v) {
    os << "  n" << v << " [label="
       << detail::dot_quote(v < opts.labels.size() ? opts.labels[v] : std::to_string(v));
    if (v == net.sink()) os << ", shape=doublecircle";
    for (NodeId h : opts.highlight) {
      if (h == v) {
        os << ", style=dashed";
        break;
      }
    }
    os << "];\n";
  }
  for (NodeId v = 0; v < net.size(); ++v) {
    auto chosen = rg.next(v);
    for (NodeId w : net.prefs(v)) {
      const bool on = chosen && *chosen == w;
      if (!on && !opts.show_network) continue;
      os << "  n" << v << " -> n" << w << " [label=\"" << net.rank(v, w) << '"';
      if (!on) os << ", style=dotted, color=gray";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace nexthop

#endif  // NEXTHOP_DOT_HPP
