// SPDX-License-Identifier: Apache-2.0

#include "wsweep/unroller.hpp"

#include <cassert>

namespace wsweep {

Unroller::Unroller(TermGraph &graph, const TransitionSystem &sys,
                   uint32_t bound)
    : graph_(graph), sys_(sys), bound_(bound) {
  for (size_t i = 0; i < sys.states.size(); ++i)
    state_idx_.emplace(sys.states[i].term, i);
  state_vals_.assign(bound + 1,
                     std::vector<TermId>(sys.states.size(), kNoTerm));
  memo_.resize(bound + 1);
  for (uint32_t f = 0; f <= bound; ++f)
    for (size_t i = 0; i < sys.states.size(); ++i)
      state_at(i, f);
}

TermId Unroller::fresh_leaf(const std::string &base, Sort sort,
                            uint32_t frame) {
  std::string name = base + "@" + std::to_string(frame);
  TermId t = graph_.mk_symbol(name, sort);
  frame_inputs_.push_back({name, t, frame});
  return t;
}

TermId Unroller::leaf_at(TermId sym, uint32_t frame) {
  auto it = state_idx_.find(sym);
  if (it != state_idx_.end())
    return state_at(it->second, frame);
  return fresh_leaf(graph_.term(sym).symbol, graph_.sort(sym), frame);
}

TermId Unroller::state_at(size_t idx, uint32_t frame) {
  TermId &slot = state_vals_[frame][idx];
  if (slot != kNoTerm)
    return slot;
  const TsState &st = sys_.states[idx];
  uint64_t key = uint64_t(frame) * sys_.states.size() + idx;
  if (!in_progress_.insert(key).second)
    throw BoundError("state '" + st.name +
                     "' has a cyclic init dependency at frame " +
                     std::to_string(frame));
  TermId v;
  if (frame == 0)
    v = st.init != kNoTerm ? instantiate(st.init, 0)
                           : fresh_leaf(graph_.term(st.term).symbol,
                                        graph_.sort(st.term), 0);
  else
    v = st.next != kNoTerm ? instantiate(st.next, frame - 1)
                           : fresh_leaf(graph_.term(st.term).symbol,
                                        graph_.sort(st.term), frame);
  in_progress_.erase(key);
  slot = v;
  return v;
}

TermId Unroller::instantiate(TermId root, uint32_t frame) {
  assert(frame <= bound_);
  auto &memo = memo_[frame];
  std::vector<std::pair<TermId, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(t))
      continue;
    const Term &n = graph_.term(t);
    if (!expanded) {
      if (n.op == Op::Symbol) {
        TermId v = leaf_at(t, frame); // may re-enter for init chains
        memo.emplace(t, v);
        continue;
      }
      if (n.op == Op::Const) {
        memo.emplace(t, t);
        continue;
      }
      stack.push_back({t, true});
      for (auto it = n.operands.rbegin(); it != n.operands.rend(); ++it)
        if (!memo.count(*it))
          stack.push_back({*it, false});
      continue;
    }
    std::vector<TermId> ops;
    ops.reserve(n.operands.size());
    for (TermId u : n.operands)
      ops.push_back(memo.at(u));
    memo.emplace(t, graph_.mk_term(n.op, std::move(ops), n.attr0, n.attr1));
  }
  return memo.at(root);
}

TermId Unroller::at_frame(TermId term, uint32_t frame) {
  assert(frame <= bound_);
  return instantiate(term, frame);
}

TermId Unroller::constraints_all_frames() {
  TermId acc = kNoTerm;
  for (uint32_t f = 0; f <= bound_; ++f)
    for (TermId c : sys_.constraints) {
      TermId inst = instantiate(c, f);
      acc = acc == kNoTerm ? inst : graph_.mk_term(Op::And, {acc, inst});
    }
  return acc == kNoTerm ? graph_.mk_const(BitVec::one(1)) : acc;
}

TermId Unroller::bads_at(uint32_t frame) {
  TermId acc = kNoTerm;
  for (TermId b : sys_.bads) {
    TermId inst = instantiate(b, frame);
    acc = acc == kNoTerm ? inst : graph_.mk_term(Op::Or, {acc, inst});
  }
  return acc == kNoTerm ? graph_.mk_const(BitVec::zero(1)) : acc;
}

TermId Unroller::bads_all_frames() {
  TermId acc = kNoTerm;
  for (uint32_t f = 0; f <= bound_; ++f) {
    TermId inst = bads_at(f);
    acc = acc == kNoTerm ? inst : graph_.mk_term(Op::Or, {acc, inst});
  }
  return acc == kNoTerm ? graph_.mk_const(BitVec::zero(1)) : acc;
}

} // namespace wsweep
