// SPDX-License-Identifier: Apache-2.0

#include "wsweep/ops.hpp"

#include <cassert>

namespace wsweep {

int op_arity(Op op) {
  switch (op) {
  case Op::Symbol:
  case Op::Const:
    return 0;
  case Op::ConstArray:
  case Op::Not:
  case Op::Neg:
  case Op::Inc:
  case Op::Dec:
  case Op::RedAnd:
  case Op::RedOr:
  case Op::RedXor:
  case Op::Uext:
  case Op::Sext:
  case Op::Slice:
    return 1;
  case Op::Write:
  case Op::Ite:
    return 3;
  default:
    return 2;
  }
}

const char *op_name(Op op) {
  switch (op) {
  case Op::Symbol:
    return "symbol";
  case Op::Const:
    return "const";
  case Op::ConstArray:
    return "const-array";
  case Op::Not:
    return "not";
  case Op::Neg:
    return "neg";
  case Op::Inc:
    return "inc";
  case Op::Dec:
    return "dec";
  case Op::RedAnd:
    return "redand";
  case Op::RedOr:
    return "redor";
  case Op::RedXor:
    return "redxor";
  case Op::Uext:
    return "uext";
  case Op::Sext:
    return "sext";
  case Op::Slice:
    return "slice";
  case Op::And:
    return "and";
  case Op::Or:
    return "or";
  case Op::Xor:
    return "xor";
  case Op::Nand:
    return "nand";
  case Op::Nor:
    return "nor";
  case Op::Xnor:
    return "xnor";
  case Op::Implies:
    return "implies";
  case Op::Iff:
    return "iff";
  case Op::Eq:
    return "eq";
  case Op::Neq:
    return "neq";
  case Op::Ult:
    return "ult";
  case Op::Ulte:
    return "ulte";
  case Op::Ugt:
    return "ugt";
  case Op::Ugte:
    return "ugte";
  case Op::Slt:
    return "slt";
  case Op::Slte:
    return "slte";
  case Op::Sgt:
    return "sgt";
  case Op::Sgte:
    return "sgte";
  case Op::Add:
    return "add";
  case Op::Sub:
    return "sub";
  case Op::Mul:
    return "mul";
  case Op::Udiv:
    return "udiv";
  case Op::Urem:
    return "urem";
  case Op::Sdiv:
    return "sdiv";
  case Op::Srem:
    return "srem";
  case Op::Smod:
    return "smod";
  case Op::Sll:
    return "sll";
  case Op::Srl:
    return "srl";
  case Op::Sra:
    return "sra";
  case Op::Concat:
    return "concat";
  case Op::Read:
    return "read";
  case Op::Write:
    return "write";
  case Op::Ite:
    return "ite";
  }
  return "?";
}

bool op_returns_array(Op op) {
  return op == Op::ConstArray || op == Op::Write;
}

namespace {

[[noreturn]] void sort_fail(Op op, const std::string &detail) {
  throw SortError(std::string(op_name(op)) + ": " + detail);
}

void need_bitvec(Op op, const Sort &s, const char *which) {
  if (!s.is_bitvec())
    sort_fail(op, std::string(which) + " operand must be a bit-vector, got " +
                      s.str());
}

void need_same_width(Op op, const Sort &a, const Sort &b) {
  need_bitvec(op, a, "first");
  need_bitvec(op, b, "second");
  if (a.width != b.width)
    sort_fail(op, "operand widths differ: " + std::to_string(a.width) +
                      " vs " + std::to_string(b.width));
}

} // namespace

Sort infer_sort(Op op, std::span<const Sort> v, uint64_t attr0,
                uint64_t attr1) {
  if (int(v.size()) != op_arity(op))
    sort_fail(op, "expected " + std::to_string(op_arity(op)) +
                      " operands, got " + std::to_string(v.size()));
  switch (op) {
  case Op::Symbol:
  case Op::Const:
    sort_fail(op, "leaf terms carry their sort directly");

  case Op::ConstArray: {
    need_bitvec(op, v[0], "element");
    if (attr0 < 1 || attr0 > UINT32_MAX)
      sort_fail(op, "invalid index width");
    return Sort::array(uint32_t(attr0), v[0].width);
  }

  case Op::Not:
  case Op::Neg:
  case Op::Inc:
  case Op::Dec:
    need_bitvec(op, v[0], "first");
    return v[0];

  case Op::RedAnd:
  case Op::RedOr:
  case Op::RedXor:
    need_bitvec(op, v[0], "first");
    return Sort::bitvec(1);

  case Op::Uext:
  case Op::Sext: {
    need_bitvec(op, v[0], "first");
    uint64_t w = uint64_t(v[0].width) + attr0;
    if (w > UINT32_MAX)
      sort_fail(op, "extension overflows width");
    return Sort::bitvec(uint32_t(w));
  }

  case Op::Slice: {
    need_bitvec(op, v[0], "first");
    if (attr1 > attr0 || attr0 >= v[0].width)
      sort_fail(op, "bit range [" + std::to_string(attr0) + ":" +
                        std::to_string(attr1) + "] out of bounds for width " +
                        std::to_string(v[0].width));
    return Sort::bitvec(uint32_t(attr0 - attr1 + 1));
  }

  case Op::And:
  case Op::Or:
  case Op::Xor:
  case Op::Nand:
  case Op::Nor:
  case Op::Xnor:
    need_same_width(op, v[0], v[1]);
    return v[0];

  case Op::Implies:
  case Op::Iff:
    need_same_width(op, v[0], v[1]);
    if (v[0].width != 1)
      sort_fail(op, "operands must have width 1");
    return Sort::bitvec(1);

  case Op::Eq:
  case Op::Neq:
    if (v[0] != v[1])
      sort_fail(op, "operand sorts differ: " + v[0].str() + " vs " +
                        v[1].str());
    return Sort::bitvec(1);

  case Op::Ult:
  case Op::Ulte:
  case Op::Ugt:
  case Op::Ugte:
  case Op::Slt:
  case Op::Slte:
  case Op::Sgt:
  case Op::Sgte:
    need_same_width(op, v[0], v[1]);
    return Sort::bitvec(1);

  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Udiv:
  case Op::Urem:
  case Op::Sdiv:
  case Op::Srem:
  case Op::Smod:
  case Op::Sll:
  case Op::Srl:
  case Op::Sra:
    need_same_width(op, v[0], v[1]);
    return v[0];

  case Op::Concat: {
    need_bitvec(op, v[0], "first");
    need_bitvec(op, v[1], "second");
    uint64_t w = uint64_t(v[0].width) + v[1].width;
    if (w > UINT32_MAX)
      sort_fail(op, "concat overflows width");
    return Sort::bitvec(uint32_t(w));
  }

  case Op::Read: {
    if (!v[0].is_array())
      sort_fail(op, "first operand must be an array, got " + v[0].str());
    need_bitvec(op, v[1], "index");
    if (v[1].width != v[0].index_width)
      sort_fail(op, "index width " + std::to_string(v[1].width) +
                        " does not match array index width " +
                        std::to_string(v[0].index_width));
    return Sort::bitvec(v[0].elem_width);
  }

  case Op::Write: {
    if (!v[0].is_array())
      sort_fail(op, "first operand must be an array, got " + v[0].str());
    need_bitvec(op, v[1], "index");
    need_bitvec(op, v[2], "value");
    if (v[1].width != v[0].index_width || v[2].width != v[0].elem_width)
      sort_fail(op, "index/value widths do not match array sort " +
                        v[0].str());
    return v[0];
  }

  case Op::Ite: {
    if (!v[0].is_bitvec() || v[0].width != 1)
      sort_fail(op, "condition must have width 1, got " + v[0].str());
    if (v[1] != v[2])
      sort_fail(op, "branch sorts differ: " + v[1].str() + " vs " +
                        v[2].str());
    return v[1];
  }
  }
  sort_fail(op, "unhandled op");
}

namespace {

BitVec bool_bv(bool b) { return b ? BitVec::one(1) : BitVec::zero(1); }

// SMT-LIB bvudiv: division by zero yields all ones.
WideInt udiv_val(const BitVec &a, const BitVec &b) {
  if (b.is_zero())
    return (WideInt(1) << a.width()) - 1;
  return a.uvalue() / b.uvalue();
}

// SMT-LIB bvurem: remainder by zero yields the dividend.
WideInt urem_val(const BitVec &a, const BitVec &b) {
  if (b.is_zero())
    return a.uvalue();
  return a.uvalue() % b.uvalue();
}

BitVec neg_bv(const BitVec &a) { return BitVec(a.width(), -a.uvalue()); }

} // namespace

BitVec apply_bitvec_op(Op op, std::span<const BitVec> v, uint64_t attr0,
                       uint64_t attr1) {
  switch (op) {
  case Op::Not:
    return BitVec(v[0].width(), ~v[0].uvalue());
  case Op::Neg:
    return neg_bv(v[0]);
  case Op::Inc:
    return BitVec(v[0].width(), v[0].uvalue() + 1);
  case Op::Dec:
    return BitVec(v[0].width(), v[0].uvalue() - 1);

  case Op::RedAnd:
    return bool_bv(v[0].is_ones());
  case Op::RedOr:
    return bool_bv(!v[0].is_zero());
  case Op::RedXor: {
    bool parity = false;
    for (uint32_t i = 0; i < v[0].width(); ++i)
      parity ^= v[0].bit(i);
    return bool_bv(parity);
  }

  case Op::Uext:
    return BitVec(uint32_t(v[0].width() + attr0), v[0].uvalue());
  case Op::Sext:
    return BitVec(uint32_t(v[0].width() + attr0), v[0].svalue());
  case Op::Slice:
    return BitVec(uint32_t(attr0 - attr1 + 1), v[0].uvalue() >> attr1);

  case Op::And:
    return BitVec(v[0].width(), v[0].uvalue() & v[1].uvalue());
  case Op::Or:
    return BitVec(v[0].width(), v[0].uvalue() | v[1].uvalue());
  case Op::Xor:
    return BitVec(v[0].width(), v[0].uvalue() ^ v[1].uvalue());
  case Op::Nand:
    return BitVec(v[0].width(), ~(v[0].uvalue() & v[1].uvalue()));
  case Op::Nor:
    return BitVec(v[0].width(), ~(v[0].uvalue() | v[1].uvalue()));
  case Op::Xnor:
    return BitVec(v[0].width(), ~(v[0].uvalue() ^ v[1].uvalue()));
  case Op::Implies:
    return bool_bv(v[0].is_zero() || !v[1].is_zero());
  case Op::Iff:
    return bool_bv(v[0] == v[1]);

  case Op::Eq:
    return bool_bv(v[0] == v[1]);
  case Op::Neq:
    return bool_bv(v[0] != v[1]);
  case Op::Ult:
    return bool_bv(v[0].uvalue() < v[1].uvalue());
  case Op::Ulte:
    return bool_bv(v[0].uvalue() <= v[1].uvalue());
  case Op::Ugt:
    return bool_bv(v[0].uvalue() > v[1].uvalue());
  case Op::Ugte:
    return bool_bv(v[0].uvalue() >= v[1].uvalue());
  case Op::Slt:
    return bool_bv(v[0].svalue() < v[1].svalue());
  case Op::Slte:
    return bool_bv(v[0].svalue() <= v[1].svalue());
  case Op::Sgt:
    return bool_bv(v[0].svalue() > v[1].svalue());
  case Op::Sgte:
    return bool_bv(v[0].svalue() >= v[1].svalue());

  case Op::Add:
    return BitVec(v[0].width(), v[0].uvalue() + v[1].uvalue());
  case Op::Sub:
    return BitVec(v[0].width(), v[0].uvalue() - v[1].uvalue());
  case Op::Mul:
    return BitVec(v[0].width(), v[0].uvalue() * v[1].uvalue());
  case Op::Udiv:
    return BitVec(v[0].width(), udiv_val(v[0], v[1]));
  case Op::Urem:
    return BitVec(v[0].width(), urem_val(v[0], v[1]));

  case Op::Sdiv: {
    // Sign-case expansion of bvsdiv over bvudiv.
    bool na = v[0].bit(v[0].width() - 1), nb = v[1].bit(v[1].width() - 1);
    BitVec a = na ? neg_bv(v[0]) : v[0];
    BitVec b = nb ? neg_bv(v[1]) : v[1];
    BitVec q(v[0].width(), udiv_val(a, b));
    return (na != nb) ? neg_bv(q) : q;
  }
  case Op::Srem: {
    // Remainder takes the sign of the dividend.
    bool na = v[0].bit(v[0].width() - 1), nb = v[1].bit(v[1].width() - 1);
    BitVec a = na ? neg_bv(v[0]) : v[0];
    BitVec b = nb ? neg_bv(v[1]) : v[1];
    BitVec r(v[0].width(), urem_val(a, b));
    return na ? neg_bv(r) : r;
  }
  case Op::Smod: {
    // Result takes the sign of the divisor; bvsmod s 0 = s.
    bool na = v[0].bit(v[0].width() - 1), nb = v[1].bit(v[1].width() - 1);
    BitVec a = na ? neg_bv(v[0]) : v[0];
    BitVec b = nb ? neg_bv(v[1]) : v[1];
    BitVec u(v[0].width(), urem_val(a, b));
    if (u.is_zero())
      return u;
    if (!na && !nb)
      return u;
    if (na && !nb)
      return BitVec(u.width(), neg_bv(u).uvalue() + v[1].uvalue());
    if (!na && nb)
      return BitVec(u.width(), u.uvalue() + v[1].uvalue());
    return neg_bv(u);
  }

  case Op::Sll: {
    if (v[1].uvalue() >= v[0].width())
      return BitVec::zero(v[0].width());
    return BitVec(v[0].width(), v[0].uvalue() << v[1].to_u64());
  }
  case Op::Srl: {
    if (v[1].uvalue() >= v[0].width())
      return BitVec::zero(v[0].width());
    return BitVec(v[0].width(), v[0].uvalue() >> v[1].to_u64());
  }
  case Op::Sra: {
    uint32_t w = v[0].width();
    bool sign = v[0].bit(w - 1);
    if (v[1].uvalue() >= w)
      return sign ? BitVec::ones(w) : BitVec::zero(w);
    uint64_t k = v[1].to_u64();
    WideInt r = v[0].uvalue() >> k;
    if (sign && k > 0)
      r |= ((WideInt(1) << k) - 1) << (w - k);
    return BitVec(w, r);
  }

  case Op::Concat:
    return BitVec(v[0].width() + v[1].width(),
                  (v[0].uvalue() << v[1].width()) | v[1].uvalue());

  default:
    assert(false && "apply_bitvec_op: not a pure bit-vector op");
    throw SortError("apply_bitvec_op: unsupported op");
  }
}

} // namespace wsweep
