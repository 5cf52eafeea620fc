// SPDX-License-Identifier: Apache-2.0

#include "wsweep/sweep_engine.hpp"

#include <doctest.h>

#include <array>

using namespace wsweep;

namespace {

BitVec bv(uint32_t w, uint64_t v) { return BitVec::from_u64(w, v); }

struct DeclineOracle : Oracle {
  OracleVerdict check(TermId, TermId) override {
    return OracleVerdict::unknown("stub declines");
  }
  std::string name() const override { return "decline"; }
};

} // namespace

TEST_CASE("commuted adders merge and the residual proves equivalence") {
  TermGraph g;
  TermId a1 = g.mk_symbol("a1", Sort::bitvec(8));
  TermId a2 = g.mk_symbol("a2", Sort::bitvec(8));
  TermId b1 = g.mk_symbol("b1", Sort::bitvec(8));
  TermId b2 = g.mk_symbol("b2", Sort::bitvec(8));
  TermId constraint = g.mk_term(
      Op::And, {g.mk_term(Op::Eq, {a1, b1}), g.mk_term(Op::Eq, {a2, b2})});
  TermId sum_a = g.mk_term(Op::Add, {a1, a2});
  TermId sum_b = g.mk_term(Op::Add, {b2, b1});
  TermId check = g.mk_term(Op::Neq, {sum_a, sum_b});

  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, constraint, check, oracle);

  REQUIRE(r.verdict.has_value());
  CHECK(r.verdict->is_unsat());
  CHECK(r.constraint == constraint);
  CHECK(r.stats.merges_confirmed >= 2); // the sums, then the whole check
  CHECK(r.stats.merges_refuted == 0);
  CHECK(r.stats.nodes_after < r.stats.nodes_before);
  CHECK(r.stats.cex_separation_failures == 0);
  // The surviving sum is the one merged onto; the check cone folds away.
  CHECK(g.term(r.check).op == Op::Const);
  TermId kept = r.subst.find(sum_b);
  CHECK((kept == sum_a || kept == sum_b));
}

TEST_CASE("constant rows collapse onto the literal itself") {
  TermGraph g;
  TermId x = g.mk_symbol("x", Sort::bitvec(8));
  TermId z8 = g.mk_const(bv(8, 0));
  TermId masked = g.mk_term(Op::And, {x, z8});
  TermId z1 = g.mk_const(bv(1, 0));
  TermId check = g.mk_term(Op::Neq, {masked, z8});
  TermId t = g.mk_const(bv(1, 1));

  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, t, check, oracle);
  REQUIRE(r.verdict.has_value());
  CHECK(r.verdict->is_unsat());
  // Direction is forced: the and-with-zero maps onto the zero literal.
  CHECK(r.subst.find(masked) == z8);
  CHECK(r.subst.find(check) == z1);
  CHECK(r.stats.merges_confirmed == 2);
  CHECK(r.stats.solver_calls == 3); // two miters and the residual
  CHECK(g.term(r.check).op == Op::Const);
}

TEST_CASE("pinned symbols merge toward their pin constant") {
  TermGraph g;
  TermId x = g.mk_symbol("x", Sort::bitvec(8));
  TermId c5 = g.mk_const(bv(8, 5));
  TermId constraint = g.mk_term(Op::Eq, {x, c5});
  TermId check = g.mk_term(Op::Neq, {x, c5});
  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, constraint, check, oracle);
  REQUIRE(r.verdict.has_value());
  CHECK(r.verdict->is_unsat());
  CHECK(r.subst.find(x) == c5);
}

TEST_CASE("refuting models join the pattern set and separate the pair") {
  TermGraph g;
  TermId z = g.mk_symbol("z", Sort::bitvec(12));
  TermId check = g.mk_term(Op::Eq, {z, g.mk_const(bv(12, 0xabc))});
  TermId t = g.mk_const(bv(1, 1));

  SweepConfig config;
  config.patterns = 8;
  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, t, check, oracle, config);

  // Random patterns miss the single satisfying point, so the check row
  // looks constant-zero; the miter refutes that and recycles the model.
  CHECK(r.stats.merges_refuted == 1);
  CHECK(r.stats.merges_confirmed == 0);
  CHECK(r.stats.patterns_used == 9);
  CHECK(r.stats.solver_calls == 2);
  CHECK(r.stats.cex_separation_failures == 0);
  REQUIRE(r.verdict.has_value());
  REQUIRE(r.verdict->is_sat());
  CHECK(std::get<BitVec>(r.verdict->model.leaves.at(z)) == bv(12, 0xabc));
  CHECK(r.check == check);
}

TEST_CASE("table relations discharge reads without solver calls") {
  TermGraph g;
  auto ca = [&](uint32_t ew, uint64_t fill) {
    return g.mk_term(Op::ConstArray, {g.mk_const(bv(ew, fill))}, 2);
  };
  TermId whole = ca(8, 0), hi = ca(4, 0), lo = ca(4, 0);
  for (uint64_t i = 0; i < 4; ++i) {
    uint64_t h = (i * 5 + 2) & 0xf, l = (i * 7 + 1) & 0xf;
    auto wr = [&](TermId a, uint32_t ew, uint64_t v) {
      return g.mk_term(Op::Write,
                       {a, g.mk_const(bv(2, i)), g.mk_const(bv(ew, v))});
    };
    whole = wr(whole, 8, (h << 4) | l);
    hi = wr(hi, 4, h);
    lo = wr(lo, 4, l);
  }
  TableMap tables;
  for (TermId tt : {whole, hi, lo})
    tables.emplace(tt, std::make_shared<const ConstArrayTable>(
                           *extract_const_array(g, tt)));

  TermId k = g.mk_symbol("k", Sort::bitvec(2));
  TermId direct = g.mk_term(Op::Read, {whole, k});
  TermId split = g.mk_term(Op::Concat, {g.mk_term(Op::Read, {hi, k}),
                                        g.mk_term(Op::Read, {lo, k})});
  TermId check = g.mk_term(Op::Neq, {direct, split});
  TermId t = g.mk_const(bv(1, 1));

  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, t, check, oracle, {}, &tables);

  CHECK(r.stats.array_merges == 1);
  CHECK(r.stats.merges_confirmed == 1); // the folded check, not the reads
  CHECK(r.stats.solver_calls == 2);     // that miter plus the residual
  REQUIRE(r.verdict.has_value());
  CHECK(r.verdict->is_unsat());
  CHECK(g.term(r.check).op == Op::Const);
}

TEST_CASE("an exhausted budget reports honestly instead of guessing") {
  TermGraph g;
  TermId x = g.mk_symbol("x", Sort::bitvec(8));
  TermId z8 = g.mk_const(bv(8, 0));
  TermId check = g.mk_term(Op::Neq, {g.mk_term(Op::And, {x, z8}), z8});
  TermId t = g.mk_const(bv(1, 1));

  SweepConfig config;
  config.solver_budget_total = 1;
  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, t, check, oracle, config);
  CHECK_FALSE(r.verdict.has_value());
  CHECK(r.unknown_reason.find("budget") != std::string::npos);
  CHECK(r.stats.solver_calls == 1);
}

TEST_CASE("an oracle that declines leaves the cone unmerged") {
  TermGraph g;
  TermId x = g.mk_symbol("x", Sort::bitvec(8));
  TermId y = g.mk_symbol("y", Sort::bitvec(8));
  TermId check = g.mk_term(Op::Neq, {g.mk_term(Op::Add, {x, y}),
                                     g.mk_term(Op::Add, {y, x})});
  TermId t = g.mk_const(bv(1, 1));
  DeclineOracle oracle;
  SweepResult r = sweep(g, t, check, oracle);
  CHECK_FALSE(r.verdict.has_value());
  CHECK(r.unknown_reason == "stub declines");
  CHECK(r.stats.merges_confirmed == 0);
  CHECK(r.stats.merges_refuted == 0);
  CHECK(r.stats.solver_calls >= 2);
  CHECK(r.check == check);
  CHECK(r.subst.empty());
}

TEST_CASE("contradictory structural pins settle without any query") {
  TermGraph g;
  TermId x = g.mk_symbol("x", Sort::bitvec(8));
  TermId y = g.mk_symbol("y", Sort::bitvec(8));
  TermId constraint = g.mk_term(
      Op::And, {g.mk_term(Op::Eq, {x, g.mk_const(bv(8, 1))}),
                g.mk_term(Op::And, {g.mk_term(Op::Eq, {x, y}),
                                    g.mk_term(Op::Eq, {y, g.mk_const(bv(8, 2))})})});
  TermId check = g.mk_term(Op::Ult, {x, y});
  BruteForceOracle oracle(g);
  SweepResult r = sweep(g, constraint, check, oracle);
  REQUIRE(r.verdict.has_value());
  CHECK(r.verdict->is_unsat());
  CHECK(r.stats.solver_calls == 0);
  CHECK(r.stats.nodes_after == r.stats.nodes_before);
  CHECK(r.check == check);
}

TEST_CASE("equal seeds reproduce the whole run") {
  auto once = [] {
    TermGraph g;
    TermId a = g.mk_symbol("a", Sort::bitvec(8));
    TermId b = g.mk_symbol("b", Sort::bitvec(8));
    TermId c = g.mk_symbol("c", Sort::bitvec(8));
    TermId constraint = g.mk_term(Op::Eq, {a, b});
    TermId lhs = g.mk_term(Op::Xor, {g.mk_term(Op::Add, {a, c}), c});
    TermId rhs = g.mk_term(Op::Xor, {g.mk_term(Op::Add, {b, c}), c});
    TermId check = g.mk_term(Op::Neq, {lhs, rhs});
    BruteForceOracle oracle(g);
    SweepConfig config;
    config.seed = 77;
    return sweep(g, constraint, check, oracle, config);
  };
  SweepResult r1 = once(), r2 = once();
  CHECK(r1.stats.merges_confirmed == r2.stats.merges_confirmed);
  CHECK(r1.stats.merges_refuted == r2.stats.merges_refuted);
  CHECK(r1.stats.solver_calls == r2.stats.solver_calls);
  CHECK(r1.stats.patterns_used == r2.stats.patterns_used);
  CHECK(r1.stats.nodes_after == r2.stats.nodes_after);
  CHECK(r1.verdict.has_value() == r2.verdict.has_value());
}
