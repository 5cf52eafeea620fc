// SPDX-License-Identifier: Apache-2.0

#include "wsweep/rules.hpp"

#include <sstream>

namespace wsweep {

namespace {

// Splits "a.name" into side and name.
std::pair<RulesFile::Side, std::string> parse_ref(int line,
                                                  const std::string &tok) {
  auto dot = tok.find('.');
  if (dot == std::string::npos || dot + 1 == tok.size())
    throw RulesParseError(line, "expected <a|b>.<name>, got '" + tok + "'");
  std::string side = tok.substr(0, dot);
  if (side != "a" && side != "b")
    throw RulesParseError(line, "side must be 'a' or 'b', got '" + side + "'");
  return {side == "a" ? RulesFile::Side::A : RulesFile::Side::B,
          tok.substr(dot + 1)};
}

} // namespace

RulesFile parse_rules(const std::string &text) {
  RulesFile rules;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto cut = raw.find('#'); cut != std::string::npos)
      raw.resize(cut);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t)
      tok.push_back(t);
    if (tok.empty())
      continue;

    if (tok[0] == "match") {
      if (tok.size() != 3)
        throw RulesParseError(line_no, "match expects two signal references");
      auto [sa, na] = parse_ref(line_no, tok[1]);
      auto [sb, nb] = parse_ref(line_no, tok[2]);
      if (sa != RulesFile::Side::A || sb != RulesFile::Side::B)
        throw RulesParseError(line_no, "match expects a.<name> then b.<name>");
      rules.matches.push_back({na, nb});
    } else if (tok[0] == "pin") {
      if (tok.size() != 3)
        throw RulesParseError(line_no,
                              "pin expects a signal reference and a value");
      auto [side, name] = parse_ref(line_no, tok[1]);
      for (char c : tok[2])
        if (c != '0' && c != '1')
          throw RulesParseError(line_no, "pin value must be binary, got '" +
                                             tok[2] + "'");
      rules.pins.push_back({side, name, tok[2]});
    } else if (tok[0] == "check") {
      if (tok.size() != 4 || tok[2] != "==")
        throw RulesParseError(line_no,
                              "check expects a.<name> == b.<name>");
      auto [sa, na] = parse_ref(line_no, tok[1]);
      auto [sb, nb] = parse_ref(line_no, tok[3]);
      if (sa != RulesFile::Side::A || sb != RulesFile::Side::B)
        throw RulesParseError(line_no, "check expects a.<name> then b.<name>");
      rules.checks.push_back({na, nb});
    } else {
      throw RulesParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
  }
  return rules;
}

} // namespace wsweep
