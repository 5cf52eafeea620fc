// SPDX-License-Identifier: Apache-2.0
//
// Operator set for the term graph, sort inference, and the concrete
// bit-vector evaluation kernel shared by constant folding and simulation.

#pragma once

#include "wsweep/bitvec.hpp"
#include "wsweep/sort.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace wsweep {

enum class Op : uint8_t {
  // Leaves.
  Symbol,
  Const,
  ConstArray, // every element equals the single bit-vector operand

  // Unary.
  Not,
  Neg,
  Inc,
  Dec,
  RedAnd,
  RedOr,
  RedXor,
  Uext,  // attr0 = extension amount
  Sext,  // attr0 = extension amount
  Slice, // attr0 = upper, attr1 = lower

  // Binary bitwise / boolean.
  And,
  Or,
  Xor,
  Nand,
  Nor,
  Xnor,
  Implies,
  Iff,

  // Binary relational (result width 1).
  Eq,
  Neq,
  Ult,
  Ulte,
  Ugt,
  Ugte,
  Slt,
  Slte,
  Sgt,
  Sgte,

  // Binary arithmetic.
  Add,
  Sub,
  Mul,
  Udiv,
  Urem,
  Sdiv,
  Srem,
  Smod,
  Sll,
  Srl,
  Sra,
  Concat,

  // Arrays.
  Read,
  Write,

  // Ternary.
  Ite,
};

/// Number of term operands (Symbol and Const take none).
int op_arity(Op op);

/// Name as used in the transition-system text format.
const char *op_name(Op op);

/// True for ops whose result sort is an array.
bool op_returns_array(Op op);

struct SortError : std::runtime_error {
  explicit SortError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Result sort of `op` applied to operands of the given sorts.
/// Throws SortError when the combination is ill-typed.
Sort infer_sort(Op op, std::span<const Sort> operands, uint64_t attr0,
                uint64_t attr1);

/// Evaluates a pure bit-vector op on concrete operands. Follows the
/// SMT-LIB fixed-size bit-vector theory, in particular:
///   udiv x 0 = all ones, urem x 0 = x,
///   sdiv/srem/smod defined by the usual sign-case expansions,
///   shift amounts >= width saturate to zero / sign fill.
/// Must not be called for Symbol/Const/array ops or Ite.
BitVec apply_bitvec_op(Op op, std::span<const BitVec> operands, uint64_t attr0,
                       uint64_t attr1);

} // namespace wsweep
