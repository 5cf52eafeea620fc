// SPDX-License-Identifier: Apache-2.0

#include "wsweep/btor2_frontend.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wsweep {

using Kind = Btor2ParseError::Kind;

const TsVar *TransitionSystem::find_input(const std::string &name) const {
  for (const auto &v : inputs)
    if (v.name == name)
      return &v;
  return nullptr;
}

const TsState *TransitionSystem::find_state(const std::string &name) const {
  for (const auto &s : states)
    if (s.name == name)
      return &s;
  return nullptr;
}

const TsVar *TransitionSystem::find_output(const std::string &name) const {
  for (const auto &v : outputs)
    if (v.name == name)
      return &v;
  return nullptr;
}

namespace {

struct OpcodeInfo {
  Op op;
  int operands; // node operands
  int immediates; // trailing integer immediates
};

const std::unordered_map<std::string, OpcodeInfo> &opcode_table() {
  static const std::unordered_map<std::string, OpcodeInfo> table = {
      {"not", {Op::Not, 1, 0}},       {"neg", {Op::Neg, 1, 0}},
      {"inc", {Op::Inc, 1, 0}},       {"dec", {Op::Dec, 1, 0}},
      {"redand", {Op::RedAnd, 1, 0}}, {"redor", {Op::RedOr, 1, 0}},
      {"redxor", {Op::RedXor, 1, 0}}, {"uext", {Op::Uext, 1, 1}},
      {"sext", {Op::Sext, 1, 1}},     {"slice", {Op::Slice, 1, 2}},
      {"and", {Op::And, 2, 0}},       {"or", {Op::Or, 2, 0}},
      {"xor", {Op::Xor, 2, 0}},       {"nand", {Op::Nand, 2, 0}},
      {"nor", {Op::Nor, 2, 0}},       {"xnor", {Op::Xnor, 2, 0}},
      {"implies", {Op::Implies, 2, 0}}, {"iff", {Op::Iff, 2, 0}},
      {"eq", {Op::Eq, 2, 0}},         {"neq", {Op::Neq, 2, 0}},
      {"ult", {Op::Ult, 2, 0}},       {"ulte", {Op::Ulte, 2, 0}},
      {"ugt", {Op::Ugt, 2, 0}},       {"ugte", {Op::Ugte, 2, 0}},
      {"slt", {Op::Slt, 2, 0}},       {"slte", {Op::Slte, 2, 0}},
      {"sgt", {Op::Sgt, 2, 0}},       {"sgte", {Op::Sgte, 2, 0}},
      {"add", {Op::Add, 2, 0}},       {"sub", {Op::Sub, 2, 0}},
      {"mul", {Op::Mul, 2, 0}},       {"udiv", {Op::Udiv, 2, 0}},
      {"urem", {Op::Urem, 2, 0}},     {"sdiv", {Op::Sdiv, 2, 0}},
      {"srem", {Op::Srem, 2, 0}},     {"smod", {Op::Smod, 2, 0}},
      {"sll", {Op::Sll, 2, 0}},       {"srl", {Op::Srl, 2, 0}},
      {"sra", {Op::Sra, 2, 0}},       {"concat", {Op::Concat, 2, 0}},
      {"read", {Op::Read, 2, 0}},     {"write", {Op::Write, 3, 0}},
      {"ite", {Op::Ite, 3, 0}},
  };
  return table;
}

// Constructs recognized but deliberately unsupported. Listing them keeps
// the diagnostic honest: "unsupported" rather than a typo suggestion.
const std::unordered_set<std::string> &rejected_opcodes() {
  static const std::unordered_set<std::string> set = {
      "fair",  "justice", "rol",    "ror",    "saddo", "uaddo", "sdivo",
      "smulo", "umulo",   "ssubo",  "usubo",
  };
  return set;
}

class Parser {
public:
  Parser(const std::string &text, TermGraph &graph, std::string prefix)
      : text_(text), graph_(graph), prefix_(std::move(prefix)) {}

  TransitionSystem run();

private:
  [[noreturn]] void fail(Kind kind, const std::string &msg) {
    throw Btor2ParseError(kind, line_no_, msg);
  }

  int64_t parse_int(const std::string &tok) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      fail(Kind::Malformed, "expected integer, got '" + tok + "'");
    return v;
  }

  uint64_t parse_uint(const std::string &tok) {
    int64_t v = parse_int(tok);
    if (v < 0)
      fail(Kind::Malformed, "expected non-negative integer, got '" + tok + "'");
    return uint64_t(v);
  }

  Sort resolve_sort(const std::string &tok) {
    int64_t id = parse_int(tok);
    auto it = sorts_.find(id);
    if (it == sorts_.end()) {
      if (nodes_.count(id))
        fail(Kind::Malformed, "id " + tok + " is a node, expected a sort");
      fail(Kind::UndefinedReference, "undefined sort id " + tok);
    }
    return it->second;
  }

  TermId resolve_node(const std::string &tok) {
    int64_t id = parse_int(tok);
    if (id == 0)
      fail(Kind::Malformed, "node reference must be non-zero");
    auto it = nodes_.find(id < 0 ? -id : id);
    if (it == nodes_.end()) {
      if (sorts_.count(id < 0 ? -id : id))
        fail(Kind::Malformed, "id refers to a sort, expected a node");
      fail(Kind::UndefinedReference,
           "undefined node id " + std::to_string(id < 0 ? -id : id));
    }
    TermId t = it->second;
    if (id < 0) {
      if (!graph_.sort(t).is_bitvec())
        fail(Kind::SortMismatch, "negated reference to array-sorted node");
      t = graph_.mk_term(Op::Not, {t});
    }
    return t;
  }

  void define_node(int64_t id, TermId term) {
    if (id <= 0)
      fail(Kind::Malformed, "node id must be positive");
    if (nodes_.count(id) || sorts_.count(id))
      fail(Kind::Malformed, "duplicate id " + std::to_string(id));
    nodes_.emplace(id, term);
    sys_.node_table.emplace(id, term);
  }

  // New leaf with declared-name bookkeeping. An empty user name synthesizes
  // one from the line id so every leaf stays addressable.
  TermId define_leaf(const std::string &user_name, char role_tag, int64_t id,
                     Sort sort, std::string &out_name) {
    out_name = user_name.empty()
                   ? "$" + std::string(1, role_tag) + std::to_string(id)
                   : user_name;
    if (!declared_names_.insert(out_name).second)
      fail(Kind::Malformed, "duplicate symbol name '" + out_name + "'");
    try {
      return graph_.mk_symbol(prefix_ + out_name, sort);
    } catch (const SortError &e) {
      fail(Kind::SortMismatch, e.what());
    }
  }

  void check_declared_sort(Sort declared, TermId term) {
    if (graph_.sort(term) != declared)
      fail(Kind::SortMismatch, "declared sort " + declared.str() +
                                   " does not match inferred sort " +
                                   graph_.sort(term).str());
  }

  void handle_line(std::vector<std::string> &tok);

  const std::string &text_;
  TermGraph &graph_;
  std::string prefix_;
  int64_t line_no_ = 0;

  std::unordered_map<int64_t, Sort> sorts_;
  std::unordered_map<int64_t, TermId> nodes_;
  std::unordered_map<TermId, size_t> state_index_; // state term -> sys_.states
  std::unordered_set<std::string> declared_names_;
  TransitionSystem sys_;
};

TransitionSystem Parser::run() {
  std::istringstream in(text_);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no_;
    if (auto cut = line.find(';'); cut != std::string::npos)
      line.resize(cut);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t)
      tok.push_back(t);
    if (tok.empty())
      continue;
    handle_line(tok);
  }
  return std::move(sys_);
}

void Parser::handle_line(std::vector<std::string> &tok) {
  int64_t id = parse_int(tok[0]);
  if (tok.size() < 2)
    fail(Kind::Malformed, "missing opcode");
  const std::string &kw = tok[1];

  auto need = [&](size_t n, const char *what) {
    if (tok.size() != n)
      fail(Kind::ArityMismatch, std::string(kw) + " expects " + what);
  };

  if (kw == "sort") {
    if (tok.size() < 3)
      fail(Kind::Malformed, "sort expects a kind");
    if (id <= 0 || sorts_.count(id) || nodes_.count(id))
      fail(Kind::Malformed, "duplicate or invalid sort id");
    if (tok[2] == "bitvec") {
      need(4, "'bitvec <width>'");
      uint64_t w = parse_uint(tok[3]);
      if (w < 1 || w > UINT32_MAX)
        fail(Kind::Malformed, "invalid bit-vector width " + tok[3]);
      sorts_.emplace(id, Sort::bitvec(uint32_t(w)));
    } else if (tok[2] == "array") {
      need(5, "'array <index sort> <element sort>'");
      Sort si = resolve_sort(tok[3]);
      Sort se = resolve_sort(tok[4]);
      if (!si.is_bitvec() || !se.is_bitvec())
        fail(Kind::SortMismatch, "array index/element sorts must be bitvec");
      sorts_.emplace(id, Sort::array(si.width, se.width));
    } else {
      fail(Kind::Malformed, "unknown sort kind '" + tok[2] + "'");
    }
    return;
  }

  if (kw == "input" || kw == "state") {
    if (tok.size() != 3 && tok.size() != 4)
      fail(Kind::ArityMismatch, kw + " expects a sort and optional symbol");
    Sort sort = resolve_sort(tok[2]);
    std::string name;
    TermId term = define_leaf(tok.size() == 4 ? tok[3] : "",
                              kw == "input" ? 'i' : 's', id, sort, name);
    define_node(id, term);
    if (kw == "input") {
      sys_.inputs.push_back({name, term});
    } else {
      state_index_.emplace(term, sys_.states.size());
      sys_.states.push_back({name, term, kNoTerm, kNoTerm});
    }
    return;
  }

  if (kw == "output") {
    if (tok.size() != 3 && tok.size() != 4)
      fail(Kind::ArityMismatch, "output expects a node and optional symbol");
    TermId term = resolve_node(tok[2]);
    std::string name =
        tok.size() == 4 ? tok[3] : "$o" + std::to_string(id);
    if (!declared_names_.insert(name).second)
      fail(Kind::Malformed, "duplicate symbol name '" + name + "'");
    sys_.outputs.push_back({name, term});
    return;
  }

  if (kw == "init" || kw == "next") {
    need(5, "'<sort> <state> <value>'");
    Sort sort = resolve_sort(tok[2]);
    TermId state = resolve_node(tok[3]);
    TermId value = resolve_node(tok[4]);
    auto it = state_index_.find(state);
    if (it == state_index_.end())
      fail(Kind::Malformed, kw + " target is not a state");
    TsState &st = sys_.states[it->second];
    if (graph_.sort(state) != sort)
      fail(Kind::SortMismatch, kw + " sort does not match state sort");
    // BTOR2 initializes an array state from a scalar by filling every
    // element; represent that as an explicit constant array.
    if (kw == "init" && sort.is_array() && graph_.sort(value).is_bitvec()) {
      if (graph_.sort(value).width != sort.elem_width)
        fail(Kind::SortMismatch, "array fill width does not match element");
      try {
        value = graph_.mk_term(Op::ConstArray, {value}, sort.index_width);
      } catch (const SortError &e) {
        fail(Kind::SortMismatch, e.what());
      }
    }
    if (graph_.sort(value) != sort)
      fail(Kind::SortMismatch, kw + " value sort does not match state sort");
    TermId &slot = kw == "init" ? st.init : st.next;
    if (slot != kNoTerm)
      fail(Kind::Malformed, "state has more than one " + kw);
    slot = value;
    return;
  }

  if (kw == "constraint" || kw == "bad") {
    need(3, "a single node");
    TermId term = resolve_node(tok[2]);
    if (!graph_.sort(term).is_bool())
      fail(Kind::SortMismatch, kw + " node must have width 1");
    (kw == "constraint" ? sys_.constraints : sys_.bads).push_back(term);
    return;
  }

  if (kw == "const" || kw == "constd" || kw == "consth") {
    need(4, "a sort and a literal");
    Sort sort = resolve_sort(tok[2]);
    if (!sort.is_bitvec())
      fail(Kind::SortMismatch, kw + " requires a bit-vector sort");
    const std::string &lit = tok[3];
    if (kw == "const") {
      bool ok = false;
      BitVec b = BitVec::from_binary(sort.width, lit, ok);
      if (!ok)
        fail(Kind::Malformed, "bad binary literal '" + lit + "' for width " +
                                  std::to_string(sort.width));
      define_node(id, graph_.mk_const(b));
      return;
    }
    std::string digits = lit;
    bool negate = false;
    if (kw == "constd" && !digits.empty() && digits[0] == '-') {
      negate = true;
      digits.erase(0, 1);
    }
    bool valid = !digits.empty();
    WideInt value = 0;
    if (valid) {
      try {
        value = WideInt(kw == "consth" ? "0x" + digits : digits);
      } catch (const std::runtime_error &) {
        valid = false;
      }
    }
    if (!valid)
      fail(Kind::Malformed, "bad " + kw + " literal '" + lit + "'");
    if (value >= (WideInt(1) << sort.width))
      fail(Kind::Malformed, "literal '" + lit + "' does not fit width " +
                                std::to_string(sort.width));
    define_node(id, graph_.mk_const(BitVec(sort.width,
                                           negate ? WideInt(-value) : value)));
    return;
  }

  if (kw == "zero" || kw == "one" || kw == "ones") {
    need(3, "a sort");
    Sort sort = resolve_sort(tok[2]);
    if (!sort.is_bitvec())
      fail(Kind::SortMismatch, kw + " requires a bit-vector sort");
    BitVec v = kw == "zero"  ? BitVec::zero(sort.width)
               : kw == "one" ? BitVec::one(sort.width)
                             : BitVec::ones(sort.width);
    define_node(id, graph_.mk_const(v));
    return;
  }

  auto op_it = opcode_table().find(kw);
  if (op_it == opcode_table().end()) {
    if (rejected_opcodes().count(kw))
      fail(Kind::UnknownOpcode, "unsupported construct '" + kw + "'");
    fail(Kind::UnknownOpcode, "unknown opcode '" + kw + "'");
  }
  const OpcodeInfo &info = op_it->second;
  size_t expect = 3 + size_t(info.operands) + size_t(info.immediates);
  if (tok.size() != expect)
    fail(Kind::ArityMismatch,
         kw + " expects " + std::to_string(info.operands) + " operand(s)" +
             (info.immediates ? " and " + std::to_string(info.immediates) +
                                    " immediate(s)"
                              : ""));
  Sort declared = resolve_sort(tok[2]);
  std::vector<TermId> operands;
  for (int i = 0; i < info.operands; ++i)
    operands.push_back(resolve_node(tok[3 + i]));
  uint64_t attr0 = 0, attr1 = 0;
  if (info.immediates >= 1)
    attr0 = parse_uint(tok[3 + info.operands]);
  if (info.immediates >= 2)
    attr1 = parse_uint(tok[4 + info.operands]);
  TermId term;
  try {
    term = graph_.mk_term(info.op, std::move(operands), attr0, attr1);
  } catch (const SortError &e) {
    fail(Kind::SortMismatch, e.what());
  }
  check_declared_sort(declared, term);
  define_node(id, term);
}

} // namespace

TransitionSystem parse_btor2(const std::string &text, TermGraph &graph,
                             const std::string &symbol_prefix) {
  Parser p(text, graph, symbol_prefix);
  return p.run();
}

} // namespace wsweep
