// SPDX-License-Identifier: Apache-2.0
//
// Equivalence oracles. A query asks for a model of `assumptions AND goal`;
// Unsat therefore certifies that the goal cannot hold under the
// assumptions. Every Sat answer carries a model that has been replayed
// through the evaluator; models that fail replay degrade to Unknown
// instead of being trusted.

#pragma once

#include "wsweep/simulator.hpp"
#include "wsweep/term_graph.hpp"

#include <memory>
#include <string>

namespace wsweep {

struct OracleVerdict {
  enum class Kind { Sat, Unsat, Unknown };

  Kind kind = Kind::Unknown;
  Pattern model;      // populated and replay-validated for Sat
  std::string reason; // populated for Unknown

  static OracleVerdict sat(Pattern m) {
    return {Kind::Sat, std::move(m), ""};
  }
  static OracleVerdict unsat() { return {Kind::Unsat, {}, ""}; }
  static OracleVerdict unknown(std::string why) {
    return {Kind::Unknown, {}, std::move(why)};
  }

  bool is_sat() const { return kind == Kind::Sat; }
  bool is_unsat() const { return kind == Kind::Unsat; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

class Oracle {
public:
  virtual ~Oracle() = default;

  /// Decides `assumptions AND goal`, both width-1 terms of the graph the
  /// oracle was constructed over.
  virtual OracleVerdict check(TermId assumptions, TermId goal) = 0;

  virtual std::string name() const = 0;
};

/// Decides queries by enumerating assignments to the support leaves.
/// Top-level `eq(x, y)` conjuncts of the assumptions collapse x and y to
/// one enumerated draw and `eq(x, c)` fixes the value, so equal-input
/// checks only pay for one side. Support parts disconnected from the goal
/// are satisfied once and their model is reused. Queries whose free
/// support exceeds `width_cap` bits, or that reach into an array leaf,
/// return Unknown.
class BruteForceOracle : public Oracle {
public:
  explicit BruteForceOracle(const TermGraph &graph, uint32_t width_cap = 20)
      : graph_(graph), width_cap_(width_cap) {}

  OracleVerdict check(TermId assumptions, TermId goal) override;
  std::string name() const override { return "brute-force"; }

  /// Pattern evaluations spent over the oracle's lifetime.
  uint64_t eval_count() const { return eval_count_; }

private:
  struct Component;
  const TermGraph &graph_;
  uint32_t width_cap_;
  uint64_t eval_count_ = 0;
};

/// Speaks SMT-LIB 2 to a solver child process (`/bin/sh -c command`),
/// keeping it alive across queries: assumptions assert once at the base
/// level, each goal inside push/pop. Timeouts, protocol deviations, and
/// models that fail replay all produce Unknown; the process respawns on
/// the next query after a failure.
class ExternalProcessOracle : public Oracle {
public:
  ExternalProcessOracle(const TermGraph &graph, std::string command,
                        uint64_t timeout_ms);
  ~ExternalProcessOracle() override;

  OracleVerdict check(TermId assumptions, TermId goal) override;
  std::string name() const override { return "external"; }

private:
  struct Process;
  bool ensure_process(TermId assumptions);
  void shutdown();

  const TermGraph &graph_;
  std::string command_;
  uint64_t timeout_ms_;
  std::unique_ptr<Process> proc_;
  TermId asserted_assumptions_ = kNoTerm;
};

} // namespace wsweep
