// SPDX-License-Identifier: Apache-2.0

#include "wsweep/btor2_writer.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wsweep {

namespace {

class Writer {
public:
  Writer(const TermGraph &graph) : graph_(graph) {}

  // Role of a symbol leaf: plain input or state.
  void mark_state(TermId t) { state_syms_.insert(t); }
  void set_name(TermId t, const std::string &n) { names_[t] = n; }

  int64_t sort_id(Sort s) {
    for (auto &[k, line] : sort_lines_)
      if (k == s)
        return line;
    int64_t id;
    if (s.is_bitvec()) {
      id = next_id_++;
      out_ << id << " sort bitvec " << s.width << "\n";
    } else {
      int64_t idx = sort_id(Sort::bitvec(s.index_width));
      int64_t elem = sort_id(Sort::bitvec(s.elem_width));
      id = next_id_++;
      out_ << id << " sort array " << idx << " " << elem << "\n";
    }
    sort_lines_.push_back({s, id});
    return id;
  }

  // Emits the node for `t` if not yet emitted; returns its line id.
  int64_t emit(TermId t) {
    auto it = ids_.find(t);
    if (it != ids_.end())
      return it->second;
    for (TermId u : graph_.post_order({&t, 1}))
      if (!ids_.count(u))
        emit_one(u);
    return ids_.at(t);
  }

  void line_init(int64_t sid, int64_t state, int64_t value) {
    out_ << next_id_++ << " init " << sid << " " << state << " " << value
         << "\n";
  }
  void line_next(int64_t sid, int64_t state, int64_t value) {
    out_ << next_id_++ << " next " << sid << " " << state << " " << value
         << "\n";
  }
  void line_flag(const char *kw, int64_t node) {
    out_ << next_id_++ << " " << kw << " " << node << "\n";
  }
  void line_output(int64_t node, const std::string &name) {
    out_ << next_id_++ << " output " << node;
    if (!name.empty())
      out_ << " " << name;
    out_ << "\n";
  }

  std::string str() const { return out_.str(); }

private:
  void emit_one(TermId t) {
    const Term &n = graph_.term(t);
    int64_t sid = sort_id(n.sort);
    switch (n.op) {
    case Op::Symbol: {
      auto nit = names_.find(t);
      const std::string &name = nit == names_.end() ? n.symbol : nit->second;
      int64_t id = next_id_++;
      out_ << id << " " << (state_syms_.count(t) ? "state" : "input") << " "
           << sid;
      if (!name.empty())
        out_ << " " << name;
      out_ << "\n";
      ids_[t] = id;
      return;
    }
    case Op::Const: {
      int64_t id = next_id_++;
      out_ << id << " const " << sid << " " << n.value->to_binary() << "\n";
      ids_[t] = id;
      return;
    }
    case Op::ConstArray: {
      // No combinational spelling exists; an initialized anonymous state
      // reads back as the same constant-array term.
      int64_t elem = ids_.at(n.operands[0]);
      int64_t id = next_id_++;
      out_ << id << " state " << sid << "\n";
      line_init(sid, id, elem);
      ids_[t] = id;
      return;
    }
    case Op::Slice: {
      int64_t id = next_id_++;
      out_ << id << " slice " << sid << " " << ids_.at(n.operands[0]) << " "
           << n.attr0 << " " << n.attr1 << "\n";
      ids_[t] = id;
      return;
    }
    case Op::Uext:
    case Op::Sext: {
      int64_t id = next_id_++;
      out_ << id << " " << op_name(n.op) << " " << sid << " "
           << ids_.at(n.operands[0]) << " " << n.attr0 << "\n";
      ids_[t] = id;
      return;
    }
    default: {
      int64_t id = next_id_++;
      out_ << id << " " << op_name(n.op) << " " << sid;
      for (TermId u : n.operands)
        out_ << " " << ids_.at(u);
      out_ << "\n";
      ids_[t] = id;
      return;
    }
    }
  }

  const TermGraph &graph_;
  std::ostringstream out_;
  int64_t next_id_ = 1;
  std::unordered_map<TermId, int64_t> ids_;
  std::vector<std::pair<Sort, int64_t>> sort_lines_;
  std::unordered_set<TermId> state_syms_;
  std::unordered_map<TermId, std::string> names_;
};

} // namespace

std::string write_btor2(const TermGraph &graph, const TransitionSystem &sys) {
  Writer w(graph);
  for (const auto &st : sys.states) {
    w.mark_state(st.term);
    w.set_name(st.term, st.name);
  }
  for (const auto &in : sys.inputs)
    w.set_name(in.term, in.name);

  for (const auto &in : sys.inputs)
    w.emit(in.term);
  for (const auto &st : sys.states)
    w.emit(st.term);
  for (const auto &st : sys.states) {
    int64_t sid = w.sort_id(graph.sort(st.term));
    if (st.init != kNoTerm) {
      // A constant-array init collapses back to the scalar fill form.
      const Term &iv = graph.term(st.init);
      int64_t value = iv.op == Op::ConstArray ? w.emit(iv.operands[0])
                                              : w.emit(st.init);
      w.line_init(sid, w.emit(st.term), value);
    }
    if (st.next != kNoTerm)
      w.line_next(sid, w.emit(st.term), w.emit(st.next));
  }
  for (TermId c : sys.constraints)
    w.line_flag("constraint", w.emit(c));
  for (TermId b : sys.bads)
    w.line_flag("bad", w.emit(b));
  for (const auto &o : sys.outputs)
    w.line_output(w.emit(o.term), o.name);
  return w.str();
}

std::string write_btor2_formula(const TermGraph &graph, TermId constraint,
                                TermId check) {
  Writer w(graph);
  w.line_flag("constraint", w.emit(constraint));
  w.line_flag("bad", w.emit(check));
  return w.str();
}

} // namespace wsweep
