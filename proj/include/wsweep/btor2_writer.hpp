// SPDX-License-Identifier: Apache-2.0
//
// Emits term graphs back to BTOR2 text. Re-parsing the output into the
// same graph reproduces the original term ids, which is the round-trip
// property the tests pin down.

#pragma once

#include "wsweep/btor2_frontend.hpp"
#include "wsweep/term_graph.hpp"

#include <string>

namespace wsweep {

/// Serializes a full transition system.
std::string write_btor2(const TermGraph &graph, const TransitionSystem &sys);

/// Serializes one combinational formula: every symbol leaf becomes an
/// input, `constraint` a constraint line and `check` a bad line. Constant
/// arrays, which have no combinational BTOR2 spelling, come out as an
/// initialized auxiliary state.
std::string write_btor2_formula(const TermGraph &graph, TermId constraint,
                                TermId check);

} // namespace wsweep
