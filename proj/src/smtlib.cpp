// SPDX-License-Identifier: Apache-2.0

#include "wsweep/smtlib.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

namespace wsweep {

std::string smtlib_sort(Sort s) {
  if (s.is_bitvec())
    return "(_ BitVec " + std::to_string(s.width) + ")";
  return "(Array (_ BitVec " + std::to_string(s.index_width) + ") (_ BitVec " +
         std::to_string(s.elem_width) + "))";
}

namespace {

// Quoted symbols must not contain '|' or '\'; those characters are rare
// in signal names and get replaced rather than escaped.
std::string quote(const std::string &name) {
  std::string s = name;
  for (char &c : s)
    if (c == '|' || c == '\\')
      c = '_';
  return "|" + s + "|";
}

std::string bin_lit(const BitVec &v) { return "#b" + v.to_binary(); }

class Renderer {
public:
  explicit Renderer(const TermGraph &graph) : graph_(graph) {}

  // Reference to an already-bound or atomic term.
  std::string refer(TermId t) {
    const Term &n = graph_.term(t);
    if (n.op == Op::Const)
      return bin_lit(*n.value);
    if (n.op == Op::Symbol)
      return quote(n.symbol);
    return "t" + std::to_string(t);
  }

  std::string bool_wrap(const std::string &pred) {
    return "(ite " + pred + " #b1 #b0)";
  }

  std::string apply(TermId t) {
    const Term &n = graph_.term(t);
    auto bin = [&](const char *fn) {
      return std::string("(") + fn + " " + refer(n.operands[0]) + " " +
             refer(n.operands[1]) + ")";
    };
    switch (n.op) {
    case Op::Not:
      return "(bvnot " + refer(n.operands[0]) + ")";
    case Op::Neg:
      return "(bvneg " + refer(n.operands[0]) + ")";
    case Op::Inc:
      return "(bvadd " + refer(n.operands[0]) + " " +
             bin_lit(BitVec::one(n.sort.width)) + ")";
    case Op::Dec:
      return "(bvsub " + refer(n.operands[0]) + " " +
             bin_lit(BitVec::one(n.sort.width)) + ")";
    case Op::RedAnd: {
      uint32_t w = graph_.sort(n.operands[0]).width;
      return bool_wrap("(= " + refer(n.operands[0]) + " " +
                       bin_lit(BitVec::ones(w)) + ")");
    }
    case Op::RedOr: {
      uint32_t w = graph_.sort(n.operands[0]).width;
      return "(ite (= " + refer(n.operands[0]) + " " +
             bin_lit(BitVec::zero(w)) + ") #b0 #b1)";
    }
    case Op::RedXor: {
      // Parity as a fold of single-bit extracts.
      uint32_t w = graph_.sort(n.operands[0]).width;
      std::string x = refer(n.operands[0]);
      std::string acc = "((_ extract 0 0) " + x + ")";
      for (uint32_t i = 1; i < w; ++i)
        acc = "(bvxor " + acc + " ((_ extract " + std::to_string(i) + " " +
              std::to_string(i) + ") " + x + "))";
      return acc;
    }
    case Op::Uext:
      return "((_ zero_extend " + std::to_string(n.attr0) + ") " +
             refer(n.operands[0]) + ")";
    case Op::Sext:
      return "((_ sign_extend " + std::to_string(n.attr0) + ") " +
             refer(n.operands[0]) + ")";
    case Op::Slice:
      return "((_ extract " + std::to_string(n.attr0) + " " +
             std::to_string(n.attr1) + ") " + refer(n.operands[0]) + ")";
    case Op::And:
      return bin("bvand");
    case Op::Or:
      return bin("bvor");
    case Op::Xor:
      return bin("bvxor");
    case Op::Nand:
      return bin("bvnand");
    case Op::Nor:
      return bin("bvnor");
    case Op::Xnor:
      return bin("bvxnor");
    case Op::Implies:
      return "(bvor (bvnot " + refer(n.operands[0]) + ") " +
             refer(n.operands[1]) + ")";
    case Op::Iff:
    case Op::Eq:
      return bool_wrap(bin("="));
    case Op::Neq:
      return "(ite " + bin("=") + " #b0 #b1)";
    case Op::Ult:
      return bool_wrap(bin("bvult"));
    case Op::Ulte:
      return bool_wrap(bin("bvule"));
    case Op::Ugt:
      return bool_wrap(bin("bvugt"));
    case Op::Ugte:
      return bool_wrap(bin("bvuge"));
    case Op::Slt:
      return bool_wrap(bin("bvslt"));
    case Op::Slte:
      return bool_wrap(bin("bvsle"));
    case Op::Sgt:
      return bool_wrap(bin("bvsgt"));
    case Op::Sgte:
      return bool_wrap(bin("bvsge"));
    case Op::Add:
      return bin("bvadd");
    case Op::Sub:
      return bin("bvsub");
    case Op::Mul:
      return bin("bvmul");
    case Op::Udiv:
      return bin("bvudiv");
    case Op::Urem:
      return bin("bvurem");
    case Op::Sdiv:
      return bin("bvsdiv");
    case Op::Srem:
      return bin("bvsrem");
    case Op::Smod:
      return bin("bvsmod");
    case Op::Sll:
      return bin("bvshl");
    case Op::Srl:
      return bin("bvlshr");
    case Op::Sra:
      return bin("bvashr");
    case Op::Concat:
      return bin("concat");
    case Op::Read:
      return bin("select");
    case Op::Write:
      return "(store " + refer(n.operands[0]) + " " + refer(n.operands[1]) +
             " " + refer(n.operands[2]) + ")";
    case Op::Ite:
      return "(ite (= " + refer(n.operands[0]) + " #b1) " +
             refer(n.operands[1]) + " " + refer(n.operands[2]) + ")";
    case Op::ConstArray:
      return "((as const " + smtlib_sort(n.sort) + ") " +
             refer(n.operands[0]) + ")";
    case Op::Symbol:
    case Op::Const:
      return refer(t);
    }
    return refer(t);
  }

  // Whole cone as depth-grouped nested lets around the root reference.
  std::string render(TermId root) {
    const Term &rn = graph_.term(root);
    if (rn.op == Op::Const || rn.op == Op::Symbol)
      return refer(root);
    std::map<uint32_t, std::vector<TermId>> levels;
    for (TermId t : graph_.post_order({&root, 1})) {
      const Term &n = graph_.term(t);
      if (n.op != Op::Const && n.op != Op::Symbol)
        levels[n.depth].push_back(t);
    }
    std::ostringstream out;
    size_t opened = 0;
    for (const auto &[depth, terms] : levels) {
      out << "(let (";
      for (size_t i = 0; i < terms.size(); ++i) {
        if (i)
          out << " ";
        out << "(" << refer(terms[i]) << " " << apply(terms[i]) << ")";
      }
      out << ") ";
      ++opened;
    }
    out << refer(root);
    out << std::string(opened, ')');
    return out.str();
  }

private:
  const TermGraph &graph_;
};

} // namespace

std::string smtlib_declare(const TermGraph &graph, TermId leaf) {
  const Term &n = graph.term(leaf);
  return "(declare-const " + quote(n.symbol) + " " + smtlib_sort(n.sort) +
         ")";
}

std::string smtlib_assert(const TermGraph &graph, TermId term) {
  Renderer r(graph);
  return "(assert (= " + r.render(term) + " #b1))";
}

std::string smtlib_script(const TermGraph &graph,
                          std::span<const TermId> roots) {
  bool arrays = false;
  for (TermId t : graph.post_order(roots))
    if (graph.sort(t).is_array())
      arrays = true;
  std::ostringstream out;
  out << "(set-logic " << (arrays ? "QF_ABV" : "QF_BV") << ")\n";
  for (TermId leaf : graph.leaves_of(roots))
    out << smtlib_declare(graph, leaf) << "\n";
  for (TermId root : roots)
    out << smtlib_assert(graph, root) << "\n";
  out << "(check-sat)\n";
  return out.str();
}

} // namespace wsweep
