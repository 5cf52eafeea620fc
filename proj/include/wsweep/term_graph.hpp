// SPDX-License-Identifier: Apache-2.0
//
// Hash-consed immutable term DAG. Structurally identical terms share one
// node, so semantic equality checks below reduce to TermId comparison.

#pragma once

#include "wsweep/bitvec.hpp"
#include "wsweep/ops.hpp"
#include "wsweep/sort.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wsweep {

using TermId = uint32_t;
inline constexpr TermId kNoTerm = UINT32_MAX;

struct Term {
  Op op = Op::Symbol;
  Sort sort;
  std::vector<TermId> operands;
  uint64_t attr0 = 0; // Slice upper, Uext/Sext amount, ConstArray index width
  uint64_t attr1 = 0; // Slice lower
  std::string symbol; // Symbol only
  std::optional<BitVec> value; // Const only
  uint32_t depth = 0; // longest operand chain to a leaf
};

class TermGraph {
public:
  /// Interns an operator node. Operands must already live in this graph.
  /// All-constant bit-vector applications fold to a Const node; no other
  /// rewriting happens here.
  TermId mk_term(Op op, std::vector<TermId> operands, uint64_t attr0 = 0,
                 uint64_t attr1 = 0);

  TermId mk_const(BitVec value);
  TermId mk_symbol(const std::string &name, Sort sort);

  /// Existing symbol node for `name`, or kNoTerm.
  TermId find_symbol(const std::string &name) const;

  const Term &term(TermId id) const { return nodes_[id]; }
  Sort sort(TermId id) const { return nodes_[id].sort; }
  size_t size() const { return nodes_.size(); }

  /// Every term reachable from `roots`, operands before users, each once.
  std::vector<TermId> post_order(std::span<const TermId> roots) const;

  std::vector<TermId> post_order(std::initializer_list<TermId> roots) const {
    return post_order(std::span<const TermId>(roots.begin(), roots.size()));
  }

  /// Number of distinct terms reachable from `roots`.
  size_t node_count(std::span<const TermId> roots) const;

  /// Distinct reachable terms in the cone of `id`, cached per node.
  uint64_t ast_size(TermId id) const;

  uint32_t depth(TermId id) const { return nodes_[id].depth; }

  /// Symbol leaves reachable from `roots`, in first-visit order.
  std::vector<TermId> leaves_of(std::span<const TermId> roots) const;

  /// Operand edge count per term over the cone of `roots`.
  std::unordered_map<TermId, uint32_t>
  fanout_map(std::span<const TermId> roots) const;

private:
  TermId intern(Term node);
  uint64_t structural_hash(const Term &node) const;
  bool structural_eq(const Term &a, const Term &b) const;

  std::vector<Term> nodes_;
  std::unordered_map<uint64_t, std::vector<TermId>> cons_table_;
  std::unordered_map<std::string, TermId> symbols_;
  mutable std::vector<uint64_t> ast_size_cache_;
};

/// Union-find style substitution map. `find` follows chains until a fixed
/// point, so find(find(t)) == find(t) always holds.
class SubstMap {
public:
  TermId find(TermId t) const {
    auto it = parent_.find(t);
    while (it != parent_.end()) {
      t = it->second;
      it = parent_.find(t);
    }
    return t;
  }

  bool mapped(TermId t) const { return parent_.count(t) != 0; }

  /// Maps `from` onto the representative of `to`. `from` must itself be
  /// unmapped and must not be the representative of `to`.
  void add(TermId from, TermId to);

  bool empty() const { return parent_.empty(); }
  size_t size() const { return parent_.size(); }
  const std::unordered_map<TermId, TermId> &entries() const { return parent_; }

private:
  std::unordered_map<TermId, TermId> parent_;
};

/// Rebuilds `roots` with every mapped term replaced by its representative,
/// bottom-up. Representatives themselves are rebuilt first, so chained and
/// nested entries resolve fully. Constant folding may shrink the result.
std::vector<TermId> substitute(TermGraph &graph, std::span<const TermId> roots,
                               const SubstMap &subst);

} // namespace wsweep
