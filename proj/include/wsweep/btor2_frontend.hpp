// SPDX-License-Identifier: Apache-2.0
//
// Reader for the BTOR2 transition-system format. Parsed nodes intern
// directly into a TermGraph; the returned system keeps the input/state/
// output structure and the original (unprefixed) signal names.

#pragma once

#include "wsweep/term_graph.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsweep {

struct Btor2ParseError : std::runtime_error {
  enum class Kind {
    UnknownOpcode,
    ArityMismatch,
    SortMismatch,
    UndefinedReference,
    Malformed,
  };

  Btor2ParseError(Kind kind, int64_t line, const std::string &msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        kind(kind), line(line) {}

  Kind kind;
  int64_t line; // 1-based source line
};

struct TsVar {
  std::string name; // without the parse-time symbol prefix
  TermId term = kNoTerm;
};

struct TsState {
  std::string name;
  TermId term = kNoTerm;
  TermId init = kNoTerm; // kNoTerm when uninitialized
  TermId next = kNoTerm; // kNoTerm when the state has no transition
};

struct TransitionSystem {
  std::vector<TsVar> inputs;
  std::vector<TsState> states;
  std::vector<TermId> constraints;
  std::vector<TermId> bads;
  std::vector<TsVar> outputs;

  // Original line id -> interned term, for diagnostics and tests.
  std::map<int64_t, TermId> node_table;

  const TsVar *find_input(const std::string &name) const;
  const TsState *find_state(const std::string &name) const;
  const TsVar *find_output(const std::string &name) const;
};

/// Parses BTOR2 text. Every symbol name is interned as `prefix + name`,
/// which keeps two systems apart when they share one graph. Supported ops
/// are the combinational bit-vector/array subset plus state declarations;
/// sequential fairness constructs, rotates, and overflow flags are
/// rejected as UnknownOpcode. A bit-vector constant initializing an array
/// state is wrapped into a constant-array term of the state's sort.
TransitionSystem parse_btor2(const std::string &text, TermGraph &graph,
                             const std::string &symbol_prefix = "");

} // namespace wsweep
