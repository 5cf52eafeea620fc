// SPDX-License-Identifier: Apache-2.0

#include "wsweep/driver.hpp"

#include "wsweep/array_analysis.hpp"
#include "wsweep/btor2_frontend.hpp"
#include "wsweep/btor2_writer.hpp"
#include "wsweep/rules.hpp"
#include "wsweep/simulator.hpp"
#include "wsweep/smtlib.hpp"
#include "wsweep/unroller.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <memory>
#include <span>
#include <sstream>

namespace wsweep {

namespace {

using ordered_json = nlohmann::ordered_json;

RunReport input_error(std::string msg) {
  RunReport r;
  r.exit_code = 3;
  r.error = std::move(msg);
  return r;
}

TermId and_fold(TermGraph &graph, const std::vector<TermId> &terms) {
  TermId acc = kNoTerm;
  for (TermId t : terms)
    acc = acc == kNoTerm ? t : graph.mk_term(Op::And, {acc, t});
  return acc == kNoTerm ? graph.mk_const(BitVec::one(1)) : acc;
}

TermId or_fold(TermGraph &graph, const std::vector<TermId> &terms) {
  TermId acc = kNoTerm;
  for (TermId t : terms)
    acc = acc == kNoTerm ? t : graph.mk_term(Op::Or, {acc, t});
  return acc == kNoTerm ? graph.mk_const(BitVec::zero(1)) : acc;
}

// Frame-0 values of initialized array states tabulate when their init is
// a constant write chain.
void collect_tables(TermGraph &graph, const TransitionSystem &sys,
                    Unroller &unroller, TableMap &tables) {
  for (const TsState &st : sys.states) {
    if (!graph.sort(st.term).is_array() || st.init == kNoTerm)
      continue;
    TermId v0 = unroller.at_frame(st.term, 0);
    if (tables.count(v0))
      continue;
    if (auto table = extract_const_array(graph, v0))
      tables.emplace(v0,
                     std::make_shared<const ConstArrayTable>(std::move(*table)));
  }
}

std::string witness_text(const Pattern &model,
                         std::span<const FrameInput> inputs_a,
                         std::span<const FrameInput> inputs_b) {
  std::ostringstream out;
  auto dump = [&](std::span<const FrameInput> inputs) {
    for (const FrameInput &fi : inputs) {
      auto it = model.leaves.find(fi.term);
      if (it == model.leaves.end())
        continue;
      out << "  " << fi.name << " = " << value_str(it->second) << "\n";
    }
  };
  dump(inputs_a);
  dump(inputs_b);
  return out.str();
}

struct Outcome {
  SweepResult result;
  uint64_t oracle_unused = 0;
};

// Shared back half of both run modes.
RunReport report_run(TermGraph &graph, TermId constraint, TermId check,
                     Oracle &oracle, const DriverConfig &config,
                     const TableMap &tables,
                     std::span<const FrameInput> inputs_a,
                     std::span<const FrameInput> inputs_b,
                     const std::string &equivalent_line,
                     const std::string &counterexample_line,
                     uint32_t bound) {
  RunReport rep;
  SweepResult sw;
  if (config.no_sweep) {
    const std::array<TermId, 2> roots{constraint, check};
    sw.constraint = constraint;
    sw.check = check;
    sw.stats.nodes_before = graph.node_count(roots);
    sw.stats.nodes_after = sw.stats.nodes_before;
    auto start = std::chrono::steady_clock::now();
    OracleVerdict v = oracle.check(constraint, check);
    sw.stats.solver_calls = 1;
    sw.stats.wall_time_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    if (v.is_unknown())
      sw.unknown_reason = v.reason;
    else
      sw.verdict = v;
  } else {
    sw = sweep(graph, constraint, check, oracle, config.sweep, &tables);
  }

  ordered_json stats;
  stats["nodes_before"] = sw.stats.nodes_before;
  stats["nodes_after"] = sw.stats.nodes_after;
  stats["merges_confirmed"] = sw.stats.merges_confirmed;
  stats["merges_refuted"] = sw.stats.merges_refuted;
  stats["solver_calls"] = sw.stats.solver_calls;
  stats["array_merges"] = sw.stats.array_merges;
  stats["patterns_used"] = sw.stats.patterns_used;
  if (!sw.verdict)
    stats["verdict"] = "unknown";
  else
    stats["verdict"] = sw.verdict->is_unsat() ? "unsat" : "sat";
  stats["wall_time_ms"] = config.zero_time ? 0.0 : sw.stats.wall_time_ms;
  rep.stats_json = stats.dump(2) + "\n";

  if (!sw.verdict) {
    rep.exit_code = 2;
    rep.verdict_line =
        "UNKNOWN: " + (sw.unknown_reason.empty() ? "oracle gave no verdict"
                                                 : sw.unknown_reason);
  } else if (sw.verdict->is_unsat()) {
    rep.exit_code = 0;
    rep.verdict_line = "UNSAT: " + equivalent_line + " up to bound " +
                       std::to_string(bound);
  } else {
    rep.exit_code = 1;
    rep.verdict_line = "SAT: " + counterexample_line + " at bound " +
                       std::to_string(bound);
    rep.witness =
        witness_text(sw.verdict->model, inputs_a, inputs_b);
  }

  if (config.emit == "btor2")
    rep.emitted = write_btor2_formula(graph, sw.constraint, sw.check);
  else if (config.emit == "smt2") {
    const std::array<TermId, 2> roots{sw.constraint, sw.check};
    rep.emitted = smtlib_script(graph, roots);
  } else if (config.emit == "stats-json")
    rep.emitted = rep.stats_json;
  return rep;
}

std::unique_ptr<Oracle> make_oracle(const TermGraph &graph,
                                    const DriverConfig &config) {
  if (!config.solver_cmd.empty())
    return std::make_unique<ExternalProcessOracle>(graph, config.solver_cmd,
                                                   config.solver_timeout_ms);
  return std::make_unique<BruteForceOracle>(graph, config.brute_cap);
}

} // namespace

RunReport run_ec(const std::string &btor_a, const std::string &btor_b,
                 const std::string &rules_text, const DriverConfig &config) {
  TermGraph graph;
  TransitionSystem sys_a, sys_b;
  try {
    sys_a = parse_btor2(btor_a, graph, "a::");
  } catch (const Btor2ParseError &e) {
    return input_error(std::string("design a: ") + e.what());
  }
  try {
    sys_b = parse_btor2(btor_b, graph, "b::");
  } catch (const Btor2ParseError &e) {
    return input_error(std::string("design b: ") + e.what());
  }

  RulesFile rules;
  try {
    rules = parse_rules(rules_text);
  } catch (const RulesParseError &e) {
    return input_error(e.what());
  }
  if (rules.checks.empty())
    return input_error("rules must contain at least one check directive");

  std::unique_ptr<Unroller> ua, ub;
  try {
    ua = std::make_unique<Unroller>(graph, sys_a, config.bound);
    ub = std::make_unique<Unroller>(graph, sys_b, config.bound);
  } catch (const BoundError &e) {
    return input_error(e.what());
  }

  std::vector<TermId> conjuncts;
  auto add_conjunct = [&](TermId t) {
    const Term &n = graph.term(t);
    if (n.op == Op::Const && !n.value->is_zero())
      return; // trivially true
    conjuncts.push_back(t);
  };
  add_conjunct(ua->constraints_all_frames());
  add_conjunct(ub->constraints_all_frames());

  for (const auto &m : rules.matches) {
    const TsVar *ia = sys_a.find_input(m.a);
    const TsVar *ib = sys_b.find_input(m.b);
    if (!ia)
      return input_error("match refers to unknown input a." + m.a);
    if (!ib)
      return input_error("match refers to unknown input b." + m.b);
    if (graph.sort(ia->term) != graph.sort(ib->term))
      return input_error("matched inputs a." + m.a + " and b." + m.b +
                         " have different sorts");
    for (uint32_t f = 0; f <= config.bound; ++f)
      conjuncts.push_back(graph.mk_term(
          Op::Eq, {ua->at_frame(ia->term, f), ub->at_frame(ib->term, f)}));
  }

  for (const auto &p : rules.pins) {
    bool side_a = p.side == RulesFile::Side::A;
    const TransitionSystem &sys = side_a ? sys_a : sys_b;
    Unroller &un = side_a ? *ua : *ub;
    const char *side = side_a ? "a." : "b.";
    const TsVar *in = sys.find_input(p.name);
    if (!in)
      return input_error(std::string("pin refers to unknown input ") + side +
                         p.name);
    uint32_t width = graph.sort(in->term).width;
    bool ok = false;
    BitVec v = BitVec::from_binary(width, p.bits, ok);
    if (!ok)
      return input_error(std::string("pin value '") + p.bits + "' for " +
                         side + p.name + " is not " + std::to_string(width) +
                         " binary digits");
    TermId c = graph.mk_const(v);
    for (uint32_t f = 0; f <= config.bound; ++f)
      conjuncts.push_back(
          graph.mk_term(Op::Eq, {un.at_frame(in->term, f), c}));
  }

  std::vector<TermId> disagreements;
  for (const auto &c : rules.checks) {
    const TsVar *oa = sys_a.find_output(c.a);
    const TsVar *ob = sys_b.find_output(c.b);
    if (!oa)
      return input_error("check refers to unknown output a." + c.a);
    if (!ob)
      return input_error("check refers to unknown output b." + c.b);
    if (graph.sort(oa->term) != graph.sort(ob->term))
      return input_error("checked outputs a." + c.a + " and b." + c.b +
                         " have different sorts");
    uint32_t from = config.all_frames ? 0 : config.bound;
    for (uint32_t f = from; f <= config.bound; ++f)
      disagreements.push_back(graph.mk_term(
          Op::Neq, {ua->at_frame(oa->term, f), ub->at_frame(ob->term, f)}));
  }

  TermId constraint = and_fold(graph, conjuncts);
  TermId check = or_fold(graph, disagreements);

  TableMap tables;
  collect_tables(graph, sys_a, *ua, tables);
  collect_tables(graph, sys_b, *ub, tables);

  auto oracle = make_oracle(graph, config);
  return report_run(graph, constraint, check, *oracle, config, tables,
                    ua->frame_inputs(), ub->frame_inputs(),
                    "checked outputs are equivalent",
                    "checked outputs can disagree", config.bound);
}

RunReport run_abv(const std::string &btor, const DriverConfig &config) {
  TermGraph graph;
  TransitionSystem sys;
  try {
    sys = parse_btor2(btor, graph);
  } catch (const Btor2ParseError &e) {
    return input_error(e.what());
  }

  std::unique_ptr<Unroller> un;
  try {
    un = std::make_unique<Unroller>(graph, sys, config.bound);
  } catch (const BoundError &e) {
    return input_error(e.what());
  }

  TermId constraint = un->constraints_all_frames();
  TermId check = config.all_frames ? un->bads_all_frames()
                                   : un->bads_at(config.bound);

  TableMap tables;
  collect_tables(graph, sys, *un, tables);

  auto oracle = make_oracle(graph, config);
  return report_run(graph, constraint, check, *oracle, config, tables,
                    un->frame_inputs(), {}, "no bad state is reachable",
                    "a bad state is reachable", config.bound);
}

} // namespace wsweep
