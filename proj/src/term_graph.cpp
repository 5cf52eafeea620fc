// SPDX-License-Identifier: Apache-2.0

#include "wsweep/term_graph.hpp"

#include <algorithm>
#include <cassert>

namespace wsweep {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

} // namespace

uint64_t TermGraph::structural_hash(const Term &n) const {
  uint64_t h = uint64_t(n.op) * 0x100000001b3ULL;
  h = mix(h, n.attr0);
  h = mix(h, n.attr1);
  for (TermId t : n.operands)
    h = mix(h, t);
  if (n.op == Op::Symbol) {
    h = mix(h, std::hash<std::string>{}(n.symbol));
    h = mix(h, SortHash{}(n.sort));
  }
  if (n.op == Op::Const)
    h = mix(h, n.value->hash());
  return h;
}

bool TermGraph::structural_eq(const Term &a, const Term &b) const {
  if (a.op != b.op || a.attr0 != b.attr0 || a.attr1 != b.attr1 ||
      a.operands != b.operands)
    return false;
  if (a.op == Op::Symbol)
    return a.symbol == b.symbol && a.sort == b.sort;
  if (a.op == Op::Const)
    return *a.value == *b.value;
  return true;
}

TermId TermGraph::intern(Term node) {
  uint64_t h = structural_hash(node);
  auto &bucket = cons_table_[h];
  for (TermId id : bucket)
    if (structural_eq(nodes_[id], node))
      return id;
  TermId id = TermId(nodes_.size());
  nodes_.push_back(std::move(node));
  bucket.push_back(id);
  return id;
}

TermId TermGraph::mk_const(BitVec value) {
  Term n;
  n.op = Op::Const;
  n.sort = Sort::bitvec(value.width());
  n.value = std::move(value);
  return intern(std::move(n));
}

TermId TermGraph::mk_symbol(const std::string &name, Sort sort) {
  auto it = symbols_.find(name);
  if (it != symbols_.end()) {
    if (nodes_[it->second].sort != sort)
      throw SortError("symbol '" + name + "' redeclared with sort " +
                      sort.str() + ", was " + nodes_[it->second].sort.str());
    return it->second;
  }
  Term n;
  n.op = Op::Symbol;
  n.sort = sort;
  n.symbol = name;
  TermId id = intern(std::move(n));
  symbols_.emplace(name, id);
  return id;
}

TermId TermGraph::find_symbol(const std::string &name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? kNoTerm : it->second;
}

TermId TermGraph::mk_term(Op op, std::vector<TermId> operands, uint64_t attr0,
                          uint64_t attr1) {
  assert(op != Op::Symbol && op != Op::Const);
  std::vector<Sort> sorts;
  sorts.reserve(operands.size());
  for (TermId t : operands) {
    assert(t < nodes_.size());
    sorts.push_back(nodes_[t].sort);
  }
  Sort sort = infer_sort(op, sorts, attr0, attr1);

  // Fold applications over all-constant operands. This is the only rewrite
  // performed at construction; anything stronger is the sweep's job.
  bool all_const = !operands.empty() &&
                   std::all_of(operands.begin(), operands.end(), [&](TermId t) {
                     return nodes_[t].op == Op::Const;
                   });
  if (all_const && sort.is_bitvec() && op != Op::ConstArray) {
    if (op == Op::Ite)
      return nodes_[operands[0]].value->is_zero() ? operands[2] : operands[1];
    std::vector<BitVec> vals;
    vals.reserve(operands.size());
    for (TermId t : operands)
      vals.push_back(*nodes_[t].value);
    return mk_const(apply_bitvec_op(op, vals, attr0, attr1));
  }

  Term n;
  n.op = op;
  n.sort = sort;
  n.operands = std::move(operands);
  n.attr0 = attr0;
  n.attr1 = attr1;
  uint32_t d = 0;
  for (TermId t : n.operands)
    d = std::max(d, nodes_[t].depth + 1);
  n.depth = d;
  return intern(std::move(n));
}

std::vector<TermId> TermGraph::post_order(std::span<const TermId> roots) const {
  std::vector<TermId> order;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::pair<TermId, bool>> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it)
    stack.push_back({*it, false});
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (seen[t] == 2)
      continue;
    if (expanded) {
      seen[t] = 2;
      order.push_back(t);
      continue;
    }
    if (seen[t] == 1)
      continue;
    seen[t] = 1;
    stack.push_back({t, true});
    const auto &ops = nodes_[t].operands;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      if (!seen[*it])
        stack.push_back({*it, false});
  }
  return order;
}

size_t TermGraph::node_count(std::span<const TermId> roots) const {
  return post_order(roots).size();
}

uint64_t TermGraph::ast_size(TermId id) const {
  if (ast_size_cache_.size() < nodes_.size())
    ast_size_cache_.resize(nodes_.size(), 0);
  if (ast_size_cache_[id] == 0) {
    TermId root = id;
    ast_size_cache_[id] = post_order({&root, 1}).size();
  }
  return ast_size_cache_[id];
}

std::vector<TermId>
TermGraph::leaves_of(std::span<const TermId> roots) const {
  std::vector<TermId> leaves;
  for (TermId t : post_order(roots))
    if (nodes_[t].op == Op::Symbol)
      leaves.push_back(t);
  return leaves;
}

std::unordered_map<TermId, uint32_t>
TermGraph::fanout_map(std::span<const TermId> roots) const {
  std::unordered_map<TermId, uint32_t> fan;
  for (TermId t : post_order(roots)) {
    fan.try_emplace(t, 0);
    for (TermId u : nodes_[t].operands)
      ++fan[u];
  }
  return fan;
}

void SubstMap::add(TermId from, TermId to) {
  assert(!mapped(from) && "substitution source already mapped");
  TermId rep = find(to);
  assert(rep != from && "substitution would form a cycle");
  parent_[from] = rep;
}

std::vector<TermId> substitute(TermGraph &graph, std::span<const TermId> roots,
                               const SubstMap &subst) {
  std::unordered_map<TermId, TermId> memo;
  std::vector<std::pair<TermId, bool>> stack;
  auto push = [&](TermId t) {
    if (!memo.count(t))
      stack.push_back({t, false});
  };
  for (TermId r : roots)
    push(r);
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(t))
      continue;
    TermId rep = subst.find(t);
    if (!expanded) {
      stack.push_back({t, true});
      if (rep != t)
        push(rep);
      else
        for (TermId u : graph.term(t).operands)
          push(u);
      continue;
    }
    if (rep != t) {
      memo[t] = memo.at(rep);
      continue;
    }
    const Term &n = graph.term(t);
    if (n.operands.empty()) {
      memo[t] = t;
      continue;
    }
    std::vector<TermId> mapped_ops;
    mapped_ops.reserve(n.operands.size());
    for (TermId u : n.operands)
      mapped_ops.push_back(memo.at(u));
    memo[t] = graph.mk_term(n.op, std::move(mapped_ops), n.attr0, n.attr1);
  }
  std::vector<TermId> out;
  out.reserve(roots.size());
  for (TermId r : roots)
    out.push_back(memo.at(r));
  return out;
}

} // namespace wsweep
