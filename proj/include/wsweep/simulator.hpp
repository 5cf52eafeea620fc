// SPDX-License-Identifier: Apache-2.0
//
// Multi-pattern concrete simulation over the term DAG. Patterns assign a
// value to every symbol leaf; evaluation follows the same operator
// semantics as the solver backends, so a signature collision is evidence
// of equivalence and a signature difference is proof of inequivalence
// under that pattern.

#pragma once

#include "wsweep/term_graph.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

namespace wsweep {

/// Concrete array content: a base (array leaf or constant-array term)
/// plus a write overlay. Reads outside the overlay hit the constant fill
/// when present, otherwise a pseudo-random function seeded per leaf and
/// pattern. The PRF makes leaf arrays behave like fixed, arbitrary
/// content chosen by the pattern.
struct ArrayValue {
  TermId base = kNoTerm;
  uint32_t index_width = 1;
  uint32_t elem_width = 1;
  std::optional<BitVec> fill;
  uint64_t prf_seed = 0;
  std::shared_ptr<const std::map<WideInt, BitVec>> overlay;

  static ArrayValue leaf(TermId t, Sort sort, uint64_t prf_seed);
  static ArrayValue constant(TermId const_array_term, Sort sort, BitVec fill);

  BitVec read(const BitVec &index) const;
  ArrayValue written(const BitVec &index, const BitVec &value) const;

  /// Content beneath the overlay at `index`.
  BitVec base_read(const BitVec &index) const;

  /// Extensional equality of the represented content. Distinct leaf bases
  /// compare unequal by definition; see the note at the Eq case in the
  /// evaluator.
  friend bool operator==(const ArrayValue &a, const ArrayValue &b);

  uint64_t hash() const;
};

using Value = std::variant<BitVec, ArrayValue>;

bool value_eq(const Value &a, const Value &b);
uint64_t value_hash(const Value &v);
std::string value_str(const Value &v);

struct Pattern {
  enum class Origin { Random, Constraint, Counterexample };

  std::unordered_map<TermId, Value> leaves;
  Origin origin = Origin::Random;
};

/// Two top-level constraint conjuncts pin one signal to different
/// constants, so no legal pattern exists.
struct ConflictingConstraintsError : std::runtime_error {
  explicit ConflictingConstraintsError(const std::string &msg)
      : std::runtime_error(msg) {}
};

/// Reusable evaluation schedule for a fixed root set.
struct EvalPlan {
  std::vector<TermId> order;
  std::unordered_map<TermId, uint32_t> pos;

  static EvalPlan build(const TermGraph &graph, std::span<const TermId> roots);
};

/// Evaluates one pattern column over `plan.order` into `out` (parallel to
/// the order). Throws std::out_of_range when a leaf has no assignment.
void eval_column(const TermGraph &graph, const EvalPlan &plan,
                 const std::unordered_map<TermId, Value> &leaves,
                 std::vector<Value> &out);

/// Evaluates a single term under one pattern.
Value eval(const TermGraph &graph, TermId term, const Pattern &p);

/// Generates `count` patterns over `leaves`. Top-level equality conjuncts
/// of the constraint roots are honored structurally: `eq(x, y)` forces one
/// shared draw, `eq(x, c)` pins the value. Every other leaf draws from a
/// per-pattern engine seeded by (seed, pattern index), so runs with equal
/// seeds produce identical patterns. A pattern's origin is Constraint when
/// it satisfies all constraint roots, Random otherwise.
std::vector<Pattern> gen_patterns(const TermGraph &graph,
                                  std::span<const TermId> leaves,
                                  std::span<const TermId> constraint_roots,
                                  uint32_t count, uint64_t seed);

/// Values for every term in the cone of the root set, one column per
/// pattern, with per-term signatures folded over the row.
class SimMatrix {
public:
  SimMatrix(const TermGraph &graph, std::span<const TermId> roots,
            std::vector<Pattern> patterns);

  size_t pattern_count() const { return patterns_.size(); }
  const std::vector<Pattern> &patterns() const { return patterns_; }
  const std::vector<TermId> &order() const { return plan_.order; }
  bool contains(TermId t) const { return plan_.pos.count(t) != 0; }

  const Value &at(TermId t, size_t pattern) const {
    return rows_[plan_.pos.at(t)][pattern];
  }

  uint64_t signature(TermId t) const { return sigs_[plan_.pos.at(t)]; }

  /// Constant across all patterns? Returns the value for bit-vector rows.
  std::optional<BitVec> constant_row(TermId t) const;

  /// Appends a counterexample column and refreshes all signatures.
  void extend(const Pattern &cex);

private:
  void eval_into_column(const Pattern &p, size_t col);
  void refresh_signatures();

  const TermGraph &graph_;
  EvalPlan plan_;
  std::vector<Pattern> patterns_;
  std::vector<std::vector<Value>> rows_; // [pos][pattern]
  std::vector<uint64_t> sigs_;           // [pos]
};

} // namespace wsweep
