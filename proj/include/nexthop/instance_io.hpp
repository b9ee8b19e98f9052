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

// Line-oriented instance format:
//
//   # comment
//   nodes 3
//   sink 0
//   prefs 1: 2 0        most preferred first
//   filter 1: 1         omitted means empty
//   init 2: none        overrides the first-choice initial routing graph
//
// format_instance() writes the canonical form, which parses back to the
// same bytes.

#ifndef NEXTHOP_INSTANCE_IO_HPP
#define NEXTHOP_INSTANCE_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nexthop/model.hpp"

namespace nexthop {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Instance {
  Network net;
  /// Initial routing graph; defaults to the first-choice graph.
  RoutingGraph initial;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline NodeId parse_id(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw ParseError(line, "expected node id");
  NodeId v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') {
      throw ParseError(line, "bad node id '" + std::string(tok) + "'");
    }
    v = v * 10 + static_cast<NodeId>(c - '0');
  }
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

inline Instance parse_instance(std::string_view text) {
  std::size_t n = 0;
  bool have_nodes = false, have_sink = false;
  NodeId sink = 0;
  std::map<NodeId, std::vector<NodeId>> prefs, filters;
  std::map<NodeId, std::optional<NodeId>> init;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;

    auto toks = detail::split_ws(line);
    std::string_view key = toks[0];
    if (key == "nodes" || key == "sink") {
      if (toks.size() != 2) throw ParseError(line_no, std::string(key) + " takes one value");
      NodeId value = detail::parse_id(toks[1], line_no);
      if (key == "nodes") {
        if (have_nodes) throw ParseError(line_no, "duplicate nodes directive");
        n = value;
        have_nodes = true;
      } else {
        if (have_sink) throw ParseError(line_no, "duplicate sink directive");
        sink = value;
        have_sink = true;
      }
      continue;
    }
    if (key != "prefs" && key != "filter" && key != "init") {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
    if (!have_nodes) throw ParseError(line_no, "nodes directive must come first");
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "missing ':'");
    auto head = detail::split_ws(line.substr(0, colon));
    if (head.size() != 2) throw ParseError(line_no, "expected '<directive> <id>:'");
    NodeId v = detail::parse_id(head[1], line_no);
    if (v >= n) throw ParseError(line_no, "node " + std::to_string(v) + " out of range");
    auto rest = detail::split_ws(line.substr(colon + 1));

    if (key == "init") {
      if (rest.size() != 1) throw ParseError(line_no, "init takes one target");
      if (init.count(v)) throw ParseError(line_no, "duplicate init for node " + std::to_string(v));
      if (rest[0] == "none") {
        init[v] = std::nullopt;
      } else {
        NodeId w = detail::parse_id(rest[0], line_no);
        if (w >= n) throw ParseError(line_no, "node " + std::to_string(w) + " out of range");
        init[v] = w;
      }
      continue;
    }
    auto& table = key == "prefs" ? prefs : filters;
    if (table.count(v)) {
      throw ParseError(line_no, "duplicate " + std::string(key) + " for node " + std::to_string(v));
    }
    std::vector<NodeId> ids;
    for (auto tok : rest) {
      NodeId w = detail::parse_id(tok, line_no);
      if (w >= n) throw ParseError(line_no, "node " + std::to_string(w) + " out of range");
      ids.push_back(w);
    }
    table[v] = std::move(ids);
  }
  if (!have_nodes) throw ParseError(line_no, "missing nodes directive");
  if (!have_sink) throw ParseError(line_no, "missing sink directive");
  if (sink >= n) throw ParseError(line_no, "sink out of range");

  std::vector<std::vector<NodeId>> p(n), f(n);
  for (auto& [v, row] : prefs) p[v] = row;
  for (auto& [v, row] : filters) f[v] = row;
  Instance inst{Network(n, sink, std::move(p), std::move(f)), {}};
  inst.initial = RoutingGraph::first_choice(inst.net);
  for (auto& [v, target] : init) {
    if (v == sink) throw ParseError(0, "init given for the sink");
    if (target) {
      if (!inst.net.has_arc(v, *target)) {
        throw ParseError(0, "init arc " + std::to_string(v) + "->" +
                                std::to_string(*target) + " is not in the network");
      }
      inst.initial.set(v, *target);
    } else {
      inst.initial.clear(v);
    }
  }
  return inst;
}

inline std::string format_instance(const Network& net, const RoutingGraph* initial = nullptr) {
  std::ostringstream os;
  os << "nodes " << net.size() << '\n';
  os << "sink " << net.sink() << '\n';
  for (NodeId v = 0; v < net.size(); ++v) {
    if (net.prefs(v).empty()) continue;
    os << "prefs " << v << ':';
    for (NodeId w : net.prefs(v)) os << ' ' << w;
    os << '\n';
  }
  for (NodeId v = 0; v < net.size(); ++v) {
    if (net.filters(v).empty()) continue;
    os << "filter " << v << ':';
    for (NodeId d : net.filters(v)) os << ' ' << d;
    os << '\n';
  }
  if (initial) {
    const RoutingGraph def = RoutingGraph::first_choice(net);
    for (NodeId v = 0; v < net.size(); ++v) {
      if (v == net.sink() || initial->next(v) == def.next(v)) continue;
      os << "init " << v << ": ";
      if (auto w = initial->next(v)) {
        os << *w;
      } else {
        os << "none";
      }
      os << '\n';
    }
  }
  return os.str();
}

inline std::string format_instance(const Instance& inst) {
  return format_instance(inst.net, &inst.initial);
}

/// Arc list as printed by format_arcs ("{1->2,2->0}"); braces, commas and
/// whitespace are all separators.
inline RoutingGraph parse_arcs(std::string_view text, std::size_t n) {
  RoutingGraph g(n);
  std::string buf(text);
  for (char& c : buf) {
    if (c == '{' || c == '}' || c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
  }
  for (auto tok : detail::split_ws(buf)) {
    auto arrow = tok.find("->");
    if (arrow == std::string_view::npos) {
      throw ParseError(0, "bad arc '" + std::string(tok) + "'");
    }
    NodeId v = detail::parse_id(tok.substr(0, arrow), 0);
    NodeId w = detail::parse_id(tok.substr(arrow + 2), 0);
    if (v >= n || w >= n) throw ParseError(0, "arc " + std::string(tok) + " out of range");
    if (g.next(v)) throw ParseError(0, "node " + std::to_string(v) + " has two arcs");
    g.set(v, w);
  }
  return g;
}

/// `label <id> <role>` lines; unlabelled ids keep their number.
inline std::vector<std::string> parse_labels(std::string_view text, std::size_t n) {
  std::vector<std::string> labels(n);
  for (NodeId v = 0; v < n; ++v) labels[v] = std::to_string(v);
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto toks = detail::split_ws(line);
    if (toks.size() != 3 || toks[0] != "label") throw ParseError(line_no, "expected 'label <id> <role>'");
    NodeId v = detail::parse_id(toks[1], line_no);
    if (v >= n) throw ParseError(line_no, "node " + std::to_string(v) + " out of range");
    labels[v] = std::string(toks[2]);
  }
  return labels;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

}  // namespace nexthop

#endif  // NEXTHOP_INSTANCE_IO_HPP
