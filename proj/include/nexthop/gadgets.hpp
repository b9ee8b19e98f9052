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

// 3-CNF to stable-tree reduction.
//
// Node layout (ids in this order):
//   r, d0,
//   per variable i:  a_i, uT_i, uF_i, b_i
//   per clause j:    s_j, q_1_j, q_2_j, q_3_j, t_j
//   padding:         d_1 .. d_L
//
// Arcs, most preferred first, and filtering lists:
//   d0   -> r                   {d0}
//   a_i  -> uT_i, uF_i          {a_i}
//   uT_i -> a_i, b_i            {uT_i}     (uF_i likewise)
//   b_1  -> r;  b_i -> a_{i-1}  {b_i}
//   s_j  -> q_1_j, q_2_j, q_3_j {d0}
//   q_z_j -> t_j, d0            {uF_x} for literal x, {uT_x} for literal -x
//   t_1  -> a_N (r if N = 0);  t_j -> s_{j-1}   {d0}
//   d_k  -> s_M (t side of the chain if M = 0)  {d0}
//
// A stable tree routes the chain r <- b_1 <- a_1 <- ... <- a_N <- t_1 <- s_1
// <- ... <- s_M; a_i hangs off uT_i (x_i true) or uF_i (x_i false). s_j
// joins only if some q_z_j may use t_j, i.e. clause j is satisfied.

#ifndef NEXTHOP_GADGETS_HPP
#define NEXTHOP_GADGETS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nexthop/analysis.hpp"
#include "nexthop/model.hpp"

namespace nexthop {

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CnfFormula {
  std::size_t num_vars = 0;
  /// Signed 1-based variable indices, exactly three per clause.
  std::vector<std::array<int, 3>> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// DIMACS: `c` comment lines, a `p cnf N M` header, then M clauses of three
/// literals, each terminated by 0 (clauses may span lines).
inline CnfFormula parse_formula(std::string_view text) {
  CnfFormula f;
  bool have_header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c') continue;
    if (tok == "p") {
      std::string fmt;
      long long nv = -1, nc = -1;
      std::string extra;
      if (have_header || !(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0 || (ls >> extra)) {
        throw FormulaError("line " + std::to_string(line_no) + ": malformed header");
      }
      f.num_vars = static_cast<std::size_t>(nv);
      declared = static_cast<std::size_t>(nc);
      have_header = true;
      continue;
    }
    if (!have_header) throw FormulaError("line " + std::to_string(line_no) + ": clause before header");
    do {
      char* end = nullptr;
      long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0' || tok.empty()) {
        throw FormulaError("line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (lit == 0) {
        if (current.size() != 3) {
          throw FormulaError("line " + std::to_string(line_no) + ": clause has " +
                             std::to_string(current.size()) + " literals, expected 3");
        }
        f.clauses.push_back({current[0], current[1], current[2]});
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::labs(lit)) > f.num_vars) {
        throw FormulaError("line " + std::to_string(line_no) + ": variable " +
                           std::to_string(std::labs(lit)) + " out of range");
      }
      current.push_back(static_cast<int>(lit));
    } while (ls >> tok);
  }
  if (!have_header) throw FormulaError("missing 'p cnf' header");
  if (!current.empty()) throw FormulaError("last clause is not terminated by 0");
  if (f.clauses.size() != declared) {
    throw FormulaError("header declares " + std::to_string(declared) + " clauses, found " +
                       std::to_string(f.clauses.size()));
  }
  return f;
}

inline std::string format_formula(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) os << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return os.str();
}

inline bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int lit : c) {
      bool value = assignment.at(static_cast<std::size_t>(std::abs(lit)) - 1);
      if ((lit > 0) == value) sat = true;
    }
    if (!sat) return false;
  }
  return true;
}

/// All satisfying assignments by truth table, in binary counting order
/// (x_1 is the low bit).
inline std::vector<std::vector<bool>> satisfying_assignments(const CnfFormula& f) {
  if (f.num_vars > 24) throw std::invalid_argument("truth table too large");
  std::vector<std::vector<bool>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.num_vars); ++mask) {
    std::vector<bool> a(f.num_vars);
    for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1U;
    if (satisfies(f, a)) out.push_back(std::move(a));
  }
  return out;
}

struct GadgetNetwork {
  Network net;
  std::vector<std::string> labels;
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;
  std::size_t padding = 0;

  static constexpr NodeId kSink = 0;
  static constexpr NodeId kDummySink = 1;

  NodeId a(std::size_t i) const { return var_base(i); }
  NodeId u_true(std::size_t i) const { return var_base(i) + 1; }
  NodeId u_false(std::size_t i) const { return var_base(i) + 2; }
  NodeId b(std::size_t i) const { return var_base(i) + 3; }
  NodeId s(std::size_t j) const { return clause_base(j); }
  NodeId q(std::size_t z, std::size_t j) const { return clause_base(j) + static_cast<NodeId>(z); }
  NodeId t(std::size_t j) const { return clause_base(j) + 4; }
  NodeId pad(std::size_t k) const {
    return static_cast<NodeId>(2 + 4 * num_vars + 5 * num_clauses + k - 1);
  }

  /// 4N + 5M + 2: the size bound for unsatisfiable formulas.
  std::size_t core_size() const { return 4 * num_vars + 5 * num_clauses + 2; }

  /// Hardness exponent implied by the padding: n = J^(1/eps) with J the
  /// core size. Reported only.
  double implied_epsilon() const {
    return std::log(static_cast<double>(core_size())) / std::log(static_cast<double>(net.size()));
  }

  /// `label <id> <role>` lines.
  std::string label_sidecar() const {
    std::ostringstream os;
    for (NodeId v = 0; v < labels.size(); ++v) os << "label " << v << ' ' << labels[v] << '\n';
    return os.str();
  }

 private:
  NodeId var_base(std::size_t i) const {
    if (i < 1 || i > num_vars) throw std::out_of_range("variable index");
    return static_cast<NodeId>(2 + 4 * (i - 1));
  }
  NodeId clause_base(std::size_t j) const {
    if (j < 1 || j > num_clauses) throw std::out_of_range("clause index");
    return static_cast<NodeId>(2 + 4 * num_vars + 5 * (j - 1));
  }
};

inline GadgetNetwork build_reduction(const CnfFormula& f, std::size_t padding) {
  const std::size_t N = f.num_vars, M = f.clauses.size();
  for (const auto& c : f.clauses) {
    for (int lit : c) {
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > N) {
        throw FormulaError("literal out of range");
      }
    }
  }
  const std::size_t n = 4 * N + 5 * M + padding + 2;
  std::vector<std::vector<NodeId>> prefs(n), filters(n);
  std::vector<std::string> labels(n);

  // Placeholder network so the id helpers can be used while building.
  GadgetNetwork g{Network(2, 0, {{}, {0}}, {{}, {}}), {}, N, M, padding};
  const NodeId r = GadgetNetwork::kSink, d0 = GadgetNetwork::kDummySink;
  labels[r] = "r";
  labels[d0] = "d0";
  prefs[d0] = {r};
  filters[d0] = {d0};

  for (std::size_t i = 1; i <= N; ++i) {
    const std::string k = std::to_string(i);
    labels[g.a(i)] = "a_" + k;
    labels[g.u_true(i)] = "uT_" + k;
    labels[g.u_false(i)] = "uF_" + k;
    labels[g.b(i)] = "b_" + k;
    prefs[g.a(i)] = {g.u_true(i), g.u_false(i)};
    prefs[g.u_true(i)] = {g.a(i), g.b(i)};
    prefs[g.u_false(i)] = {g.a(i), g.b(i)};
    prefs[g.b(i)] = {i == 1 ? r : g.a(i - 1)};
    for (NodeId v : {g.a(i), g.u_true(i), g.u_false(i), g.b(i)}) filters[v] = {v};
  }

  const NodeId chain_top = N == 0 ? r : g.a(N);
  for (std::size_t j = 1; j <= M; ++j) {
    const std::string k = std::to_string(j);
    labels[g.s(j)] = "s_" + k;
    labels[g.t(j)] = "t_" + k;
    prefs[g.s(j)] = {g.q(1, j), g.q(2, j), g.q(3, j)};
    filters[g.s(j)] = {d0};
    prefs[g.t(j)] = {j == 1 ? chain_top : g.s(j - 1)};
    filters[g.t(j)] = {d0};
    for (std::size_t z = 1; z <= 3; ++z) {
      const NodeId qz = g.q(z, j);
      const int lit = f.clauses[j - 1][z - 1];
      const auto x = static_cast<std::size_t>(std::abs(lit));
      labels[qz] = "q_" + std::to_string(z) + "_" + k;
      prefs[qz] = {g.t(j), d0};
      filters[qz] = {lit > 0 ? g.u_false(x) : g.u_true(x)};
    }
  }

  const NodeId pad_target = M == 0 ? chain_top : g.s(M);
  for (std::size_t k = 1; k <= padding; ++k) {
    const NodeId d = g.pad(k);
    labels[d] = "d_" + std::to_string(k);
    prefs[d] = {pad_target};
    filters[d] = {d0};
  }

  g.net = Network(n, r, std::move(prefs), std::move(filters));
  g.labels = std::move(labels);
  validate_network(g.net);
  return g;
}

/// Reads back x_i from the variable gadgets of a routing graph: true when
/// a_i->uT_i, uT_i->b_i, uF_i->a_i; false for the mirror image. nullopt if
/// some gadget is in neither configuration.
inline std::optional<std::vector<bool>> decode_assignment(const GadgetNetwork& g,
                                                          const RoutingGraph& rg) {
  std::vector<bool> out(g.num_vars);
  for (std::size_t i = 1; i <= g.num_vars; ++i) {
    const NodeId a = g.a(i), ut = g.u_true(i), uf = g.u_false(i), b = g.b(i);
    const bool t = rg.next(a) == ut && rg.next(ut) == b && rg.next(uf) == a;
    const bool f = rg.next(a) == uf && rg.next(uf) == b && rg.next(ut) == a;
    if (t == f) return std::nullopt;
    out[i - 1] = t;
  }
  return out;
}

struct DichotomyResult {
  bool satisfiable = false;
  /// A spanning stable tree exists.
  bool spanning = false;
  std::optional<RoutingGraph> spanning_tree;
  /// Largest equilibrium sink component.
  std::size_t max_size = 1;
  /// Some tree-stable configuration contains a padding node.
  bool padding_reachable = false;
  /// Distinct assignments decoded from all spanning stable trees.
  std::set<std::vector<bool>> decoded;
  std::set<std::vector<bool>> satisfying;
  /// A spanning stable tree whose variable gadgets did not decode.
  bool undecodable = false;

  bool yes() const { return spanning; }

  /// The dichotomy and the assignment correspondence both hold.
  bool consistent(const GadgetNetwork& g) const {
    if (undecodable) return false;
    if (satisfiable != spanning) return false;
    if (decoded != satisfying) return false;
    if (!satisfiable) return max_size <= g.core_size() && !padding_reachable;
    return max_size == g.net.size();
  }
};

/// Decides the gadget side by exhaustive search and the formula side by
/// truth table. Throws BudgetExceeded.
inline DichotomyResult verify_dichotomy(const CnfFormula& f, std::size_t padding,
                                        std::uint64_t budget = 50'000'000) {
  const GadgetNetwork g = build_reduction(f, padding);
  DichotomyResult res;
  for (auto& a : satisfying_assignments(f)) res.satisfying.insert(std::move(a));
  res.satisfiable = !res.satisfying.empty();

  SearchOptions span;
  span.notion = StabilityNotion::kTreeLiteral;
  span.spanning_only = true;
  span.budget = budget;
  search_stable_configurations(g.net, span, [&](const RoutingGraph& rg) {
    res.spanning = true;
    if (!res.spanning_tree) res.spanning_tree = rg;
    if (auto a = decode_assignment(g, rg)) {
      res.decoded.insert(*a);
    } else {
      res.undecodable = true;
    }
    return true;
  });

  // A spanning stable tree is itself an equilibrium containing every node.
  if (res.spanning) {
    res.max_size = g.net.size();
    res.padding_reachable = padding > 0;
    return res;
  }
  res.max_size = max_stable_tree(g.net, budget).size;

  for (std::size_t k = 1; k <= padding && !res.padding_reachable; ++k) {
    SearchOptions req;
    req.notion = StabilityNotion::kTreeLiteral;
    req.required = {g.pad(k)};
    req.budget = budget;
    res.padding_reachable = find_stable_configuration(g.net, req).has_value();
  }
  return res;
}

}  // namespace nexthop

#endif  // NEXTHOP_GADGETS_HPP
