// SPDX-License-Identifier: Apache-2.0
//
// Bounded unrolling of a transition system. Every state occurrence is
// replaced by its frame value: the instantiated init term at frame 0, the
// instantiated next term of the previous frame later on. States without
// init or next become fresh per-frame leaves named `<name>@<frame>`, as do
// all inputs. The resulting terms are purely combinational.

#pragma once

#include "wsweep/btor2_frontend.hpp"
#include "wsweep/term_graph.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace wsweep {

struct BoundError : std::runtime_error {
  explicit BoundError(const std::string &msg) : std::runtime_error(msg) {}
};

struct FrameInput {
  std::string name; // graph symbol name, `<signal>@<frame>`
  TermId term = kNoTerm;
  uint32_t frame = 0;
};

class Unroller {
public:
  /// Resolves all state values for frames 0..bound up front. Throws
  /// BoundError when frame-0 init terms depend on each other cyclically.
  Unroller(TermGraph &graph, const TransitionSystem &sys, uint32_t bound);

  uint32_t bound() const { return bound_; }

  /// Instantiates any term over this system's leaves at `frame`.
  TermId at_frame(TermId term, uint32_t frame);

  /// Conjunction of every system constraint over frames 0..bound.
  TermId constraints_all_frames();

  /// Disjunction of the bad properties at exactly `frame`.
  TermId bads_at(uint32_t frame);

  /// Disjunction of the bad properties over frames 0..bound.
  TermId bads_all_frames();

  /// Fresh leaves created while unrolling, in creation order.
  const std::vector<FrameInput> &frame_inputs() const { return frame_inputs_; }

private:
  TermId state_at(size_t idx, uint32_t frame);
  TermId instantiate(TermId root, uint32_t frame);
  TermId leaf_at(TermId sym, uint32_t frame);
  TermId fresh_leaf(const std::string &base, Sort sort, uint32_t frame);

  TermGraph &graph_;
  const TransitionSystem &sys_;
  uint32_t bound_;
  std::unordered_map<TermId, size_t> state_idx_;
  std::vector<std::vector<TermId>> state_vals_; // [frame][state index]
  std::vector<std::unordered_map<TermId, TermId>> memo_; // per frame
  std::unordered_set<uint64_t> in_progress_;
  std::vector<FrameInput> frame_inputs_;
};

} // namespace wsweep
