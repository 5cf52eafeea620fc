// SPDX-License-Identifier: Apache-2.0
//
// Constant-content analysis for arrays. Initialization terms that are
// write chains with constant indices and values tabulate into explicit
// tables; content-identical tables merge their array terms and
// element-wise table relations discharge read-level equivalences, both
// without any solver involvement.

#pragma once

#include "wsweep/term_graph.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace wsweep {

/// Tabulated content of an array-valued term. `entries` holds the
/// shadow-resolved constant writes; `fill` is the value everywhere else
/// when the base is a constant array. Without a fill the table is partial
/// and `base` names the uninterpreted array it extends.
struct ConstArrayTable {
  uint32_t index_width = 1;
  uint32_t elem_width = 1;
  TermId base = kNoTerm;
  std::map<WideInt, BitVec> entries;
  std::optional<BitVec> fill;

  bool complete() const { return fill.has_value(); }

  /// Content at `index`; nullopt when partial and outside the entries.
  std::optional<BitVec> read(const WideInt &index) const;

  /// Entries equal to the fill carry no information; comparing or merging
  /// tables works on this form.
  ConstArrayTable normalized() const;
};

using TableMap =
    std::unordered_map<TermId, std::shared_ptr<const ConstArrayTable>>;

/// Tabulates `term` when it is a chain of constant writes over a constant
/// array or an array symbol. Any non-constant write index or value, or any
/// other base, yields nullopt.
std::optional<ConstArrayTable> extract_const_array(const TermGraph &graph,
                                                   TermId term);

/// Merges array terms whose tables describe identical content: equal
/// normalized entries and fill, or for partial tables the same base with
/// equal normalized entries. Representatives follow the global merge
/// order (ast size, depth, id). Returns the number of merges recorded.
size_t unify_identical_arrays(const TermGraph &graph, const TableMap &tables,
                              SubstMap &subst);

/// Element-wise check for `read(A, i) == op(read(B1, i), .., read(Bn, i))`
/// with one shared index term and completely tabulated arrays: `a` must be
/// the lone read, `b` the combining application with `op` drawn from
/// `ops`. True when the relation holds for every index value, established
/// purely by table enumeration.
bool try_select_unify(const TermGraph &graph, TermId a, TermId b,
                      const TableMap &tables, std::span<const Op> ops);

} // namespace wsweep
