// SPDX-License-Identifier: Apache-2.0

#include "wsweep/sweep_engine.hpp"

#include "wsweep/simulator.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>

namespace wsweep {

bool candidate_filter(const TermGraph &graph, TermId t, TermId cand,
                      const SweepConfig &config) {
  if (t == cand)
    return false;
  if (graph.sort(t) != graph.sort(cand))
    return false;
  if (config.size_diff_limit > 0) {
    uint64_t a = graph.ast_size(t), b = graph.ast_size(cand);
    uint64_t diff = a > b ? a - b : b - a;
    if (diff > config.size_diff_limit)
      return false;
  }
  return true;
}

std::vector<TermId>
sample_candidates(const TermGraph &graph, const std::vector<TermId> &bucket,
                  TermId t, const SweepConfig &config,
                  const std::unordered_map<TermId, uint32_t> &fanout) {
  std::vector<TermId> picked = bucket;
  if (picked.size() > config.bucket_sample_limit) {
    auto fan = [&](TermId x) -> int64_t {
      auto it = fanout.find(x);
      return it == fanout.end() ? 0 : int64_t(it->second);
    };
    auto score = [&](TermId c) {
      int64_t dd = int64_t(graph.depth(t)) - int64_t(graph.depth(c));
      int64_t df = fan(t) - fan(c);
      return (dd < 0 ? -dd : dd) + (df < 0 ? -df : df);
    };
    std::sort(picked.begin(), picked.end(), [&](TermId a, TermId b) {
      int64_t sa = score(a), sb = score(b);
      return sa != sb ? sa < sb : a < b;
    });
    picked.resize(config.bucket_sample_limit);
  }
  return picked;
}

namespace {

class Sweeper {
public:
  Sweeper(TermGraph &graph, TermId constraint, TermId check, Oracle &oracle,
          const SweepConfig &config, const TableMap *tables)
      : graph_(graph), constraint_(constraint), check_(check),
        oracle_(oracle), config_(config) {
    if (tables)
      tables_ = *tables;
  }

  SweepResult run();

private:
  std::tuple<uint64_t, uint32_t, TermId> merge_key(TermId t) const {
    return {graph_.ast_size(t), graph_.depth(t), t};
  }

  // Records from -> rep with the smaller term as representative. The
  // smaller cone can never be a strict ancestor of the larger term, so
  // the rebuild in substitute() stays well-founded.
  TermId merge(TermId a, TermId b) {
    TermId rep = merge_key(a) <= merge_key(b) ? a : b;
    TermId from = rep == a ? b : a;
    subst_.add(from, rep);
    return from;
  }

  OracleVerdict miter(TermId a, TermId b) {
    assert(budget_left_ > 0);
    --budget_left_;
    ++stats_.solver_calls;
    TermId goal = graph_.mk_term(Op::Neq, {a, b});
    return oracle_.check(constraint_, goal);
  }

  OracleVerdict final_check(TermId goal) {
    assert(budget_left_ > 0);
    --budget_left_;
    ++stats_.solver_calls;
    return oracle_.check(constraint_, goal);
  }

  void rebuild_buckets(SimMatrix &sim) {
    buckets_.clear();
    for (TermId v : visited_)
      if (!subst_.mapped(v))
        buckets_.insert(sim.signature(v), v);
  }

  // Refuting model: grow the pattern set and re-bin every visited term.
  // The model only assigns the query's support, so cone leaves outside it
  // pad deterministically; the refuted pair's cones are inside the query
  // and never touch the padding.
  void absorb_cex(SimMatrix &sim, const OracleVerdict &v, TermId t,
                  TermId cand) {
    Pattern padded = v.model;
    for (TermId leaf : leaves_) {
      if (padded.leaves.count(leaf))
        continue;
      Sort s = graph_.sort(leaf);
      if (s.is_bitvec())
        padded.leaves.emplace(leaf, BitVec::zero(s.width));
      else
        padded.leaves.emplace(leaf, ArrayValue::leaf(leaf, s, 0x5eedULL ^ leaf));
    }
    sim.extend(padded);
    size_t col = sim.pattern_count() - 1;
    // A constant-row candidate is a fresh literal outside the matrix.
    Value cv = sim.contains(cand) ? sim.at(cand, col)
                                  : eval(graph_, cand, sim.patterns().back());
    if (value_eq(sim.at(t, col), cv)) {
      ++stats_.cex_separation_failures;
      assert(false && "counterexample failed to separate the refuted pair");
    }
    rebuild_buckets(sim);
  }

  bool select_unify(TermId t, TermId cand) {
    if (tables_.empty())
      return false;
    return try_select_unify(graph_, t, cand, tables_, config_.array_unify_ops) ||
           try_select_unify(graph_, cand, t, tables_, config_.array_unify_ops);
  }

  void visit(TermId t, SimMatrix &sim,
             const std::unordered_map<TermId, uint32_t> &fanout);

  TermGraph &graph_;
  TermId constraint_;
  TermId check_;
  Oracle &oracle_;
  SweepConfig config_;
  TableMap tables_;

  SweepStats stats_;
  SubstMap subst_;
  BucketTable buckets_;
  std::vector<TermId> visited_;
  std::vector<TermId> leaves_;
  uint64_t budget_left_ = 0;
};

void Sweeper::visit(TermId t, SimMatrix &sim,
                    const std::unordered_map<TermId, uint32_t> &fanout) {
  uint32_t node_budget = config_.solver_budget_per_node;

  // Constant rows miter against the literal itself first; the merge
  // direction is fixed toward the constant.
  if (auto cv = sim.constant_row(t)) {
    TermId cnode = graph_.mk_const(*cv);
    if (cnode != t && node_budget > 0 && budget_left_ > 0) {
      --node_budget;
      OracleVerdict v = miter(t, cnode);
      if (v.is_unsat()) {
        subst_.add(t, cnode);
        ++stats_.merges_confirmed;
        return;
      }
      if (v.is_sat()) {
        ++stats_.merges_refuted;
        absorb_cex(sim, v, t, cnode);
      }
    }
  }

  bool scanning = true;
  while (scanning && !subst_.mapped(t)) {
    scanning = false;
    uint64_t sig = sim.signature(t);
    const std::vector<TermId> *bucket = buckets_.bucket(sig);
    if (!bucket)
      break;
    std::vector<TermId> filtered;
    for (TermId c : *bucket)
      if (candidate_filter(graph_, t, c, config_))
        filtered.push_back(c);
    for (TermId cand : sample_candidates(graph_, filtered, t, config_,
                                         fanout)) {
      if (select_unify(t, cand)) {
        TermId gone = merge(t, cand);
        if (gone == cand)
          buckets_.erase(sig, cand);
        ++stats_.array_merges;
        break;
      }
      if (node_budget == 0 || budget_left_ == 0)
        break;
      --node_budget;
      OracleVerdict v = miter(t, cand);
      if (v.is_unsat()) {
        TermId gone = merge(t, cand);
        if (gone == cand)
          buckets_.erase(sig, cand);
        ++stats_.merges_confirmed;
        break;
      }
      if (v.is_sat()) {
        ++stats_.merges_refuted;
        absorb_cex(sim, v, t, cand);
        scanning = true; // signature moved; rescan the new bucket
        break;
      }
      // Unknown: leave the pair unresolved and try the next candidate.
    }
    if (node_budget == 0 || budget_left_ == 0)
      break;
  }

  if (!subst_.mapped(t)) {
    buckets_.insert(sim.signature(t), t);
    visited_.push_back(t);
  }
}

SweepResult Sweeper::run() {
  auto start = std::chrono::steady_clock::now();
  budget_left_ = config_.solver_budget_total;

  SweepResult res;
  res.constraint = constraint_;
  const std::array<TermId, 2> roots{constraint_, check_};
  stats_.nodes_before = graph_.node_count(roots);

  stats_.array_merges += unify_identical_arrays(graph_, tables_, subst_);

  auto finish = [&](SweepResult &&r) {
    auto end = std::chrono::steady_clock::now();
    stats_.wall_time_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
    r.stats = stats_;
    return std::move(r);
  };

  leaves_ = graph_.leaves_of(roots);
  std::vector<Pattern> patterns;
  try {
    patterns = gen_patterns(graph_, leaves_, {&constraint_, 1},
                            config_.patterns, config_.seed);
  } catch (const ConflictingConstraintsError &) {
    // Contradictory pins: no legal input exists, so the check is
    // vacuously unreachable.
    res.check = check_;
    res.verdict = OracleVerdict::unsat();
    res.subst = subst_;
    stats_.nodes_after = stats_.nodes_before;
    return finish(std::move(res));
  }
  SimMatrix sim(graph_, roots, std::move(patterns));

  auto fanout = graph_.fanout_map(roots);
  for (TermId t : graph_.post_order({&check_, 1})) {
    const Term &n = graph_.term(t);
    if (!n.sort.is_bitvec() || n.op == Op::Const)
      continue;
    assert(!subst_.mapped(t));
    visit(t, sim, fanout);
  }

  res.check = subst_.empty()
                  ? check_
                  : substitute(graph_, {&check_, 1}, subst_)[0];
  res.subst = subst_;
  const std::array<TermId, 2> after{constraint_, res.check};
  stats_.nodes_after = graph_.node_count(after);
  stats_.patterns_used = sim.pattern_count();

  if (budget_left_ == 0) {
    res.unknown_reason = "solver budget exhausted before the residual check";
    return finish(std::move(res));
  }
  OracleVerdict final_v = final_check(res.check);
  if (final_v.is_unknown()) {
    res.unknown_reason = final_v.reason.empty() ? "oracle answered unknown"
                                                : final_v.reason;
    return finish(std::move(res));
  }
  res.verdict = final_v;
  return finish(std::move(res));
}

} // namespace

SweepResult sweep(TermGraph &graph, TermId constraint, TermId check,
                  Oracle &oracle, const SweepConfig &config,
                  const TableMap *tables) {
  Sweeper s(graph, constraint, check, oracle, config, tables);
  return s.run();
}

} // namespace wsweep
