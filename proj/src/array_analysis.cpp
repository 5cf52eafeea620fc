// SPDX-License-Identifier: Apache-2.0

#include "wsweep/array_analysis.hpp"

#include <algorithm>
#include <sstream>

namespace wsweep {

std::optional<BitVec> ConstArrayTable::read(const WideInt &index) const {
  auto it = entries.find(index);
  if (it != entries.end())
    return it->second;
  return fill;
}

ConstArrayTable ConstArrayTable::normalized() const {
  ConstArrayTable t = *this;
  if (t.fill)
    std::erase_if(t.entries,
                  [&](const auto &e) { return e.second == *t.fill; });
  return t;
}

std::optional<ConstArrayTable> extract_const_array(const TermGraph &graph,
                                                   TermId term) {
  if (!graph.sort(term).is_array())
    return std::nullopt;
  ConstArrayTable table;
  Sort s = graph.sort(term);
  table.index_width = s.index_width;
  table.elem_width = s.elem_width;

  // Outermost writes shadow inner ones, so the first index seen wins.
  TermId t = term;
  while (graph.term(t).op == Op::Write) {
    const Term &n = graph.term(t);
    const Term &idx = graph.term(n.operands[1]);
    const Term &val = graph.term(n.operands[2]);
    if (idx.op != Op::Const || val.op != Op::Const)
      return std::nullopt;
    table.entries.try_emplace(idx.value->uvalue(), *val.value);
    t = n.operands[0];
  }
  const Term &base = graph.term(t);
  if (base.op == Op::Symbol) {
    table.base = t;
    return table;
  }
  if (base.op == Op::ConstArray &&
      graph.term(base.operands[0]).op == Op::Const) {
    table.base = t;
    table.fill = *graph.term(base.operands[0]).value;
    return table;
  }
  return std::nullopt;
}

namespace {

// Deterministic content key: two arrays merge exactly when their keys
// match. Partial tables additionally carry the base identity, since
// unknown content below them is only equal to itself.
std::string content_key(const ConstArrayTable &t) {
  ConstArrayTable n = t.normalized();
  std::ostringstream key;
  if (n.fill)
    key << "c " << n.fill->to_binary();
  else
    key << "p " << n.base;
  key << " " << n.index_width << " " << n.elem_width;
  for (const auto &[i, v] : n.entries)
    key << " " << i << ":" << v.to_binary();
  return key.str();
}

} // namespace

size_t unify_identical_arrays(const TermGraph &graph, const TableMap &tables,
                              SubstMap &subst) {
  std::map<std::string, std::vector<TermId>> groups;
  for (const auto &[term, table] : tables)
    groups[content_key(*table)].push_back(term);

  size_t merges = 0;
  for (auto &[key, members] : groups) {
    if (members.size() < 2)
      continue;
    auto better = [&](TermId a, TermId b) {
      auto ka = std::tuple(graph.ast_size(a), graph.depth(a), a);
      auto kb = std::tuple(graph.ast_size(b), graph.depth(b), b);
      return ka < kb;
    };
    std::sort(members.begin(), members.end(), better);
    for (size_t i = 1; i < members.size(); ++i) {
      subst.add(members[i], members[0]);
      ++merges;
    }
  }
  return merges;
}

bool try_select_unify(const TermGraph &graph, TermId a, TermId b,
                      const TableMap &tables, std::span<const Op> ops) {
  const Term &lhs = graph.term(a);
  if (lhs.op != Op::Read)
    return false;
  auto ta = tables.find(lhs.operands[0]);
  if (ta == tables.end() || !ta->second->complete())
    return false;
  TermId index = lhs.operands[1];

  const Term &rhs = graph.term(b);
  if (std::find(ops.begin(), ops.end(), rhs.op) == ops.end())
    return false;
  std::vector<const ConstArrayTable *> sources;
  for (TermId o : rhs.operands) {
    const Term &r = graph.term(o);
    if (r.op != Op::Read || r.operands[1] != index)
      return false;
    auto it = tables.find(r.operands[0]);
    if (it == tables.end() || !it->second->complete())
      return false;
    sources.push_back(it->second.get());
  }
  if (sources.empty())
    return false;

  uint32_t iw = ta->second->index_width;
  if (iw > 20) // enumeration guard
    return false;
  for (const ConstArrayTable *s : sources)
    if (s->index_width != iw)
      return false;

  std::vector<BitVec> args(sources.size(), BitVec());
  WideInt end = WideInt(1) << iw;
  for (WideInt i = 0; i < end; ++i) {
    for (size_t k = 0; k < sources.size(); ++k)
      args[k] = *sources[k]->read(i);
    BitVec combined = apply_bitvec_op(rhs.op, args, rhs.attr0, rhs.attr1);
    if (combined != *ta->second->read(i))
      return false;
  }
  return true;
}

} // namespace wsweep
