// SPDX-License-Identifier: Apache-2.0
//
// SMT-LIB 2 printing for term DAGs. Internal nodes become let bindings
// grouped by DAG depth, so sharing in the graph stays sharing in the
// text. All terms are bit-vector sorted; predicates wrap into
// (ite .. #b1 #b0) to stay inside the bit-vector/array theories.

#pragma once

#include "wsweep/term_graph.hpp"

#include <span>
#include <string>

namespace wsweep {

/// SMT-LIB rendering of a sort.
std::string smtlib_sort(Sort s);

/// `(assert (= <term> #b1))` with the term's cone rendered as nested
/// depth-grouped lets. Symbol leaves print as |quoted| names.
std::string smtlib_assert(const TermGraph &graph, TermId term);

/// Complete standalone script: declarations for every leaf of `roots`,
/// one assert per root, check-sat.
std::string smtlib_script(const TermGraph &graph,
                          std::span<const TermId> roots);

/// `(declare-const |name| <sort>)` for one symbol leaf.
std::string smtlib_declare(const TermGraph &graph, TermId leaf);

} // namespace wsweep
