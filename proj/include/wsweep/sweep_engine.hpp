// SPDX-License-Identifier: Apache-2.0
//
// Word-level sweeping. Terms of the check cone are visited in post-order;
// equal simulation signatures nominate merge candidates, a solver query
// under the constraints confirms or refutes each one, and refuting models
// feed back into the pattern set so later comparisons see them. The
// substitution applies once at the end; the constraint side is never
// rewritten.

#pragma once

#include "wsweep/array_analysis.hpp"
#include "wsweep/solver_backend.hpp"
#include "wsweep/term_graph.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace wsweep {

struct SweepConfig {
  uint32_t patterns = 32;
  uint64_t seed = 1;

  /// Candidates whose cone sizes differ by more than this never reach the
  /// solver; 0 disables the filter.
  uint64_t size_diff_limit = 32;

  /// Largest number of candidates tried per bucket visit.
  uint32_t bucket_sample_limit = 8;

  /// Solver queries allowed per visited term and per run. The run budget
  /// includes the final residual check.
  uint32_t solver_budget_per_node = 4;
  uint64_t solver_budget_total = 10000;

  /// Combining ops eligible for element-wise table unification.
  std::vector<Op> array_unify_ops = {Op::Concat};
};

struct SweepStats {
  uint64_t nodes_before = 0;
  uint64_t nodes_after = 0;
  uint64_t merges_confirmed = 0;
  uint64_t merges_refuted = 0;
  uint64_t solver_calls = 0;
  uint64_t array_merges = 0;
  uint64_t patterns_used = 0;
  double wall_time_ms = 0;

  /// Counterexamples that failed to separate the pair they refuted.
  /// Stays zero; counted rather than asserted so release runs surface it.
  uint64_t cex_separation_failures = 0;
};

struct SweepResult {
  TermId constraint = kNoTerm; // input constraint, unchanged
  TermId check = kNoTerm;      // check with the substitution applied

  /// Residual solver verdict on constraint AND check. Empty when the
  /// budget ran out beforehand or the oracle answered Unknown; then
  /// `unknown_reason` says why.
  std::optional<OracleVerdict> verdict;
  std::string unknown_reason;

  SweepStats stats;
  SubstMap subst;
};

/// True when `cand` may be mitered against `t`: same sort and cone sizes
/// within the configured limit.
bool candidate_filter(const TermGraph &graph, TermId t, TermId cand,
                      const SweepConfig &config);

/// Orders a filtered bucket by |depth(t)-depth(c)| + |fanout(t)-fanout(c)|
/// (ties toward smaller ids) and keeps the first bucket_sample_limit.
std::vector<TermId>
sample_candidates(const TermGraph &graph, const std::vector<TermId> &bucket,
                  TermId t, const SweepConfig &config,
                  const std::unordered_map<TermId, uint32_t> &fanout);

/// Signature-indexed candidate sets.
class BucketTable {
public:
  void insert(uint64_t sig, TermId t) { buckets_[sig].push_back(t); }

  void erase(uint64_t sig, TermId t) {
    auto it = buckets_.find(sig);
    if (it == buckets_.end())
      return;
    std::erase(it->second, t);
    if (it->second.empty())
      buckets_.erase(it);
  }

  const std::vector<TermId> *bucket(uint64_t sig) const {
    auto it = buckets_.find(sig);
    return it == buckets_.end() ? nullptr : &it->second;
  }

  void clear() { buckets_.clear(); }
  size_t size() const { return buckets_.size(); }

private:
  std::unordered_map<uint64_t, std::vector<TermId>> buckets_;
};

/// Runs the sweep over `check` under `constraint`. `tables` carries the
/// constant-array analysis results for the array leaves' initial values;
/// pass nullptr when there are none.
SweepResult sweep(TermGraph &graph, TermId constraint, TermId check,
                  Oracle &oracle, const SweepConfig &config = {},
                  const TableMap *tables = nullptr);

} // namespace wsweep
