// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. `wsweep ec` compares two designs under a rules
// file; `wsweep abv` checks one design's bad properties. Exit codes:
// 0 equivalent/unreachable, 1 counterexample found, 2 unknown,
// 3 usage or input error.

#include "wsweep/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

bool read_file(const std::string &path, std::string &out, std::string &err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err = "cannot open '" + path + "'";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct CommonOpts {
  wsweep::DriverConfig config;
  std::string stats_out;
  std::string array_ops = "concat";
};

void add_common(CLI::App *cmd, CommonOpts &o) {
  cmd->add_option("-k,--bound", o.config.bound, "Unrolling bound")
      ->capture_default_str();
  cmd->add_flag("--all-frames", o.config.all_frames,
                "Check every frame up to the bound, not only the last");
  cmd->add_option("--patterns", o.config.sweep.patterns,
                  "Simulation patterns per round")
      ->capture_default_str();
  cmd->add_option("--seed", o.config.sweep.seed, "Pattern generator seed")
      ->capture_default_str();
  cmd->add_option("--solver-cmd", o.config.solver_cmd,
                  "External SMT solver command reading SMT-LIB 2 on stdin");
  cmd->add_option("--solver-timeout-ms", o.config.solver_timeout_ms,
                  "Per-query timeout for the external solver")
      ->capture_default_str();
  cmd->add_option("--size-diff-limit", o.config.sweep.size_diff_limit,
                  "Max cone size difference between candidates (0 disables)")
      ->capture_default_str();
  cmd->add_option("--bucket-sample-limit",
                  o.config.sweep.bucket_sample_limit,
                  "Max candidates tried per bucket visit")
      ->capture_default_str();
  cmd->add_option("--solver-budget", o.config.sweep.solver_budget_total,
                  "Total solver queries allowed, final check included")
      ->capture_default_str();
  cmd->add_option("--brute-cap", o.config.brute_cap,
                  "Bit width cap for the enumerating oracle")
      ->capture_default_str();
  cmd->add_option("--array-unify-ops", o.array_ops,
                  "Comma list of ops for element-wise table unification "
                  "(concat,xor,add,not)")
      ->capture_default_str();
  cmd->add_option("--emit", o.config.emit,
                  "Write btor2|smt2|stats-json for the swept formula to "
                  "stdout")
      ->check(CLI::IsMember({"btor2", "smt2", "stats-json"}));
  cmd->add_flag("--no-sweep", o.config.no_sweep,
                "Skip sweeping; decide with one monolithic query");
  cmd->add_option("--stats-out", o.stats_out,
                  "Write the stats JSON to this file");
  cmd->add_flag("--zero-time", o.config.zero_time,
                "Report wall_time_ms as 0 for reproducible output");
}

bool parse_array_ops(const std::string &spec, wsweep::DriverConfig &config,
                     std::string &err) {
  config.sweep.array_unify_ops.clear();
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      continue;
    if (item == "concat")
      config.sweep.array_unify_ops.push_back(wsweep::Op::Concat);
    else if (item == "xor")
      config.sweep.array_unify_ops.push_back(wsweep::Op::Xor);
    else if (item == "add")
      config.sweep.array_unify_ops.push_back(wsweep::Op::Add);
    else if (item == "not")
      config.sweep.array_unify_ops.push_back(wsweep::Op::Not);
    else {
      err = "unknown array unify op '" + item + "'";
      return false;
    }
  }
  return true;
}

int finish(const wsweep::RunReport &rep, const CommonOpts &o) {
  if (rep.exit_code == 3) {
    std::cerr << "error: " << rep.error << "\n";
    return 3;
  }
  std::cout << rep.verdict_line << "\n";
  if (!rep.witness.empty())
    std::cout << rep.witness;
  if (!rep.emitted.empty())
    std::cout << rep.emitted;
  if (!o.stats_out.empty()) {
    std::ofstream out(o.stats_out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << o.stats_out << "'\n";
      return 3;
    }
    out << rep.stats_json;
  } else if (o.config.emit != "stats-json") {
    std::cout << rep.stats_json;
  }
  return rep.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Word-level sweeping for bounded equivalence and assertion "
               "checking"};
  app.require_subcommand(1);

  CommonOpts ec_opts, abv_opts;
  std::string file_a, file_b, rules_path, file_single;

  CLI::App *ec = app.add_subcommand("ec", "Check two designs for bounded "
                                          "output equivalence");
  ec->add_option("design_a", file_a, "First design (BTOR2)")->required();
  ec->add_option("design_b", file_b, "Second design (BTOR2)")->required();
  ec->add_option("--rules", rules_path, "Correspondence rules file")
      ->required();
  add_common(ec, ec_opts);

  CLI::App *abv = app.add_subcommand("abv", "Check one design's bad "
                                            "properties up to a bound");
  abv->add_option("design", file_single, "Design to check (BTOR2)")
      ->required();
  add_common(abv, abv_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (ec->parsed()) {
    std::string a, b, rules, err;
    if (!read_file(file_a, a, err) || !read_file(file_b, b, err) ||
        !read_file(rules_path, rules, err)) {
      std::cerr << "error: " << err << "\n";
      return 3;
    }
    if (!parse_array_ops(ec_opts.array_ops, ec_opts.config, err)) {
      std::cerr << "error: " << err << "\n";
      return 3;
    }
    return finish(wsweep::run_ec(a, b, rules, ec_opts.config), ec_opts);
  }

  std::string text, err;
  if (!read_file(file_single, text, err)) {
    std::cerr << "error: " << err << "\n";
    return 3;
  }
  if (!parse_array_ops(abv_opts.array_ops, abv_opts.config, err)) {
    std::cerr << "error: " << err << "\n";
    return 3;
  }
  return finish(wsweep::run_abv(text, abv_opts.config), abv_opts);
}
