// SPDX-License-Identifier: Apache-2.0

#include "wsweep/solver_backend.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <unordered_set>

namespace wsweep {

namespace {

void flatten_and(const TermGraph &graph, TermId root,
                 std::vector<TermId> &out) {
  std::vector<TermId> stack{root};
  std::unordered_set<TermId> seen;
  while (!stack.empty()) {
    TermId t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second)
      continue;
    const Term &n = graph.term(t);
    if (n.op == Op::And && n.sort.is_bool()) {
      stack.push_back(n.operands[0]);
      stack.push_back(n.operands[1]);
    } else {
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
}

struct UnionFind {
  std::unordered_map<TermId, TermId> parent;

  TermId find(TermId t) {
    auto it = parent.find(t);
    if (it == parent.end())
      return t;
    TermId r = find(it->second);
    it->second = r;
    return r;
  }

  void unite(TermId a, TermId b) {
    TermId ra = find(a), rb = find(b);
    if (ra == rb)
      return;
    if (rb < ra)
      std::swap(ra, rb);
    parent[rb] = ra;
  }
};

} // namespace

// Per-component enumeration state shared between the relevant component
// and the satisfy-once handling of disconnected ones.
struct BruteForceOracle::Component {
  std::vector<TermId> conjuncts;     // evaluated every assignment
  std::vector<TermId> leaves;        // all leaves of the component
  std::vector<TermId> free_reps;     // enumerated class representatives
  uint64_t free_width = 0;
};

OracleVerdict BruteForceOracle::check(TermId assumptions, TermId goal) {
  const std::array<TermId, 2> roots{assumptions, goal};
  std::vector<TermId> leaves = graph_.leaves_of(roots);
  for (TermId l : leaves)
    if (graph_.sort(l).is_array())
      return OracleVerdict::unknown("array-sorted leaf '" +
                                    graph_.term(l).symbol +
                                    "' in query support");

  std::vector<TermId> conjuncts;
  flatten_and(graph_, assumptions, conjuncts);

  // Draw classes: eq(x, y) shares one enumerated value, eq(x, c) fixes it.
  UnionFind cls;
  std::unordered_map<TermId, BitVec> pins; // keyed by class root, rebuilt below
  std::vector<std::pair<TermId, BitVec>> raw_pins;
  for (TermId c : conjuncts) {
    const Term &n = graph_.term(c);
    if ((n.op != Op::Eq && n.op != Op::Iff) || n.operands.size() != 2)
      continue;
    const Term &x = graph_.term(n.operands[0]);
    const Term &y = graph_.term(n.operands[1]);
    if (x.op == Op::Symbol && y.op == Op::Symbol)
      cls.unite(n.operands[0], n.operands[1]);
    else if (x.op == Op::Symbol && y.op == Op::Const)
      raw_pins.emplace_back(n.operands[0], *y.value);
    else if (x.op == Op::Const && y.op == Op::Symbol)
      raw_pins.emplace_back(n.operands[1], *x.value);
  }
  for (auto &[leaf, v] : raw_pins) {
    TermId r = cls.find(leaf);
    auto it = pins.find(r);
    if (it != pins.end() && it->second != v)
      return OracleVerdict::unsat(); // contradictory pins sink the query
    pins.emplace(r, v);
  }

  // Connectivity: leaves co-occurring in a conjunct belong together, and
  // the goal's leaves form the relevant component.
  UnionFind conn;
  std::unordered_map<TermId, std::vector<TermId>> conjunct_leaves;
  for (TermId c : conjuncts) {
    TermId cr = c;
    std::vector<TermId> ls = graph_.leaves_of({&cr, 1});
    for (size_t i = 1; i < ls.size(); ++i)
      conn.unite(ls[0], ls[i]);
    conjunct_leaves.emplace(c, std::move(ls));
  }
  std::vector<TermId> goal_leaves = graph_.leaves_of({&goal, 1});
  for (size_t i = 1; i < goal_leaves.size(); ++i)
    conn.unite(goal_leaves[0], goal_leaves[i]);
  // Class members must enumerate together even without a shared conjunct.
  for (TermId l : leaves)
    conn.unite(l, cls.find(l));

  TermId goal_comp = goal_leaves.empty() ? kNoTerm : conn.find(goal_leaves[0]);

  std::map<TermId, Component> comps; // keyed by connectivity root
  for (TermId l : leaves) {
    Component &c = comps[conn.find(l)];
    c.leaves.push_back(l);
    TermId rep = cls.find(l);
    if (rep == l && !pins.count(rep)) {
      c.free_reps.push_back(l);
      c.free_width += graph_.sort(l).width;
    }
  }
  for (auto &[c, ls] : conjunct_leaves) {
    TermId key = ls.empty() ? kNoTerm : conn.find(ls[0]);
    if (key == kNoTerm) {
      // No leaves: a constant conjunct constrains everything or nothing.
      if (graph_.term(c).op == Op::Const && graph_.term(c).value->is_zero())
        return OracleVerdict::unsat();
      continue;
    }
    comps[key].conjuncts.push_back(c);
  }

  // Assemble the model as we go: disconnected parts satisfy once.
  std::unordered_map<TermId, Value> model;
  auto enumerate = [&](const Component &c, std::span<const TermId> checks,
                       bool &found) -> OracleVerdict {
    found = false;
    if (c.free_width > width_cap_ || c.free_width > 62)
      return OracleVerdict::unknown(
          "support width " + std::to_string(c.free_width) +
          " exceeds enumeration cap " + std::to_string(width_cap_));
    std::vector<TermId> check_roots(checks.begin(), checks.end());
    EvalPlan plan = EvalPlan::build(graph_, check_roots);
    std::unordered_map<TermId, Value> assign;
    for (TermId l : c.leaves)
      assign[l] = BitVec::zero(graph_.sort(l).width);
    std::vector<Value> out;
    for (uint64_t counter = 0;; ++counter) {
      // Scatter counter bits over the free representatives, then mirror
      // representatives onto their class members and apply pins.
      uint32_t off = 0;
      for (TermId rep : c.free_reps) {
        uint32_t w = graph_.sort(rep).width;
        WideInt bits = 0;
        for (uint32_t b = 0; b < w; ++b)
          if (counter & (uint64_t(1) << (off + b)))
            boost::multiprecision::bit_set(bits, b);
        assign[rep] = BitVec(w, bits);
        off += w;
      }
      for (TermId l : c.leaves) {
        TermId rep = cls.find(l);
        if (auto it = pins.find(rep); it != pins.end())
          assign[l] = it->second;
        else if (rep != l)
          assign[l] = assign.at(rep);
      }
      ++eval_count_;
      eval_column(graph_, plan, assign, out);
      bool ok = true;
      for (TermId r : check_roots)
        if (std::get<BitVec>(out[plan.pos.at(r)]).is_zero()) {
          ok = false;
          break;
        }
      if (ok) {
        for (TermId l : c.leaves)
          model[l] = assign.at(l);
        found = true;
        return OracleVerdict::unsat(); // placeholder, caller decides
      }
      if (c.free_width == 0 ||
          counter + 1 == (uint64_t(1) << c.free_width))
        return OracleVerdict::unsat();
    }
  };

  // Disconnected components first; any unsatisfiable one settles it.
  for (auto &[root, comp] : comps) {
    if (root == goal_comp)
      continue;
    bool found = false;
    OracleVerdict v = enumerate(comp, comp.conjuncts, found);
    if (v.is_unknown())
      return v;
    if (!found)
      return OracleVerdict::unsat();
  }

  // Relevant component: conjuncts plus the goal itself.
  Component goal_component;
  if (goal_comp != kNoTerm)
    goal_component = comps.at(goal_comp);
  std::vector<TermId> checks = goal_component.conjuncts;
  checks.push_back(goal);
  bool found = false;
  OracleVerdict v = enumerate(goal_component, checks, found);
  if (v.is_unknown())
    return v;
  if (!found)
    return OracleVerdict::unsat();

  // Mandatory replay of the assembled model before reporting Sat.
  Pattern m;
  m.origin = Pattern::Origin::Counterexample;
  for (TermId l : leaves) {
    auto it = model.find(l);
    m.leaves.emplace(l, it != model.end()
                            ? it->second
                            : Value(BitVec::zero(graph_.sort(l).width)));
  }
  EvalPlan plan = EvalPlan::build(graph_, roots);
  std::vector<Value> out;
  eval_column(graph_, plan, m.leaves, out);
  if (std::get<BitVec>(out[plan.pos.at(assumptions)]).is_zero() ||
      std::get<BitVec>(out[plan.pos.at(goal)]).is_zero())
    return OracleVerdict::unknown("model failed replay validation");
  return OracleVerdict::sat(std::move(m));
}

} // namespace wsweep
