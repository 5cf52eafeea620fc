// SPDX-License-Identifier: Apache-2.0
//
// Correspondence rules for equivalence runs. Line format:
//   match a.<input> b.<input>     tie two inputs together every frame
//   pin <a|b>.<input> <bits>      fix one input to a binary constant
//   check a.<output> == b.<output>   output pair that must agree
// '#' starts a comment; blank lines are ignored.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsweep {

struct RulesParseError : std::runtime_error {
  RulesParseError(int line, const std::string &msg)
      : std::runtime_error("rules line " + std::to_string(line) + ": " + msg),
        line(line) {}
  int line;
};

struct RulesFile {
  enum class Side { A, B };

  struct Match {
    std::string a, b;
  };
  struct Pin {
    Side side;
    std::string name;
    std::string bits; // binary, most significant first
  };
  struct Check {
    std::string a, b;
  };

  std::vector<Match> matches;
  std::vector<Pin> pins;
  std::vector<Check> checks;
};

RulesFile parse_rules(const std::string &text);

} // namespace wsweep
