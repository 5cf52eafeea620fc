// SPDX-License-Identifier: Apache-2.0
//
// End-to-end runs: parse, unroll, analyze arrays, sweep, decide, report.
// The command-line tool is a thin shell over these two entry points.

#pragma once

#include "wsweep/sweep_engine.hpp"

#include <cstdint>
#include <string>

namespace wsweep {

struct DriverConfig {
  SweepConfig sweep;
  uint32_t bound = 0;
  bool all_frames = false;
  bool no_sweep = false;

  std::string solver_cmd; // empty selects the enumerating oracle
  uint64_t solver_timeout_ms = 10000;
  uint32_t brute_cap = 20;

  std::string emit;      // "", "btor2", "smt2", "stats-json"
  bool zero_time = false; // report wall_time_ms as 0 for stable output
};

struct RunReport {
  // 0 equivalent/unreachable, 1 counterexample, 2 unknown, 3 input error
  int exit_code = 2;
  std::string verdict_line;
  std::string witness;    // leaf assignments for exit code 1
  std::string emitted;    // --emit payload
  std::string stats_json; // always populated unless exit code 3
  std::string error;      // populated for exit code 3
};

/// Equivalence run over two systems and a rules file.
RunReport run_ec(const std::string &btor_a, const std::string &btor_b,
                 const std::string &rules_text, const DriverConfig &config);

/// Bounded assertion run over one system's bad properties.
RunReport run_abv(const std::string &btor, const DriverConfig &config);

} // namespace wsweep
