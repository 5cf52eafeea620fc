// SPDX-License-Identifier: Apache-2.0

#include "wsweep/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <unordered_set>

namespace wsweep {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t mix2(uint64_t a, uint64_t b) { return splitmix64(splitmix64(a) ^ b); }

uint64_t wide_hash(const WideInt &v) {
  uint64_t h = 0xcbf29ce484222325ULL;
  WideInt x = v;
  while (x != 0) {
    h = (h ^ x.convert_to<uint64_t>()) * 0x100000001b3ULL;
    x >>= 64;
  }
  return h;
}

// Fixed arbitrary content for unconstrained array leaves.
BitVec prf_read(uint64_t seed, const WideInt &index, uint32_t width) {
  uint64_t s = mix2(seed, wide_hash(index));
  WideInt v = 0;
  for (uint32_t done = 0; done < width; done += 64) {
    s = splitmix64(s);
    v = (v << 64) | s;
  }
  return BitVec(width, v);
}

} // namespace

ArrayValue ArrayValue::leaf(TermId t, Sort sort, uint64_t prf_seed) {
  assert(sort.is_array());
  ArrayValue a;
  a.base = t;
  a.index_width = sort.index_width;
  a.elem_width = sort.elem_width;
  a.prf_seed = prf_seed;
  return a;
}

ArrayValue ArrayValue::constant(TermId const_array_term, Sort sort,
                                BitVec fill) {
  assert(sort.is_array());
  ArrayValue a;
  a.base = const_array_term;
  a.index_width = sort.index_width;
  a.elem_width = sort.elem_width;
  a.fill = std::move(fill);
  return a;
}

BitVec ArrayValue::base_read(const BitVec &index) const {
  if (fill)
    return *fill;
  return prf_read(prf_seed, index.uvalue(), elem_width);
}

BitVec ArrayValue::read(const BitVec &index) const {
  if (overlay) {
    auto it = overlay->find(index.uvalue());
    if (it != overlay->end())
      return it->second;
  }
  return base_read(index);
}

ArrayValue ArrayValue::written(const BitVec &index, const BitVec &value) const {
  ArrayValue a = *this;
  auto next = overlay ? std::make_shared<std::map<WideInt, BitVec>>(*overlay)
                      : std::make_shared<std::map<WideInt, BitVec>>();
  (*next)[index.uvalue()] = value;
  a.overlay = std::move(next);
  return a;
}

namespace {

// Overlay entries that merely restate the base content do not change the
// represented function; comparisons and hashes skip them.
template <typename Fn>
void for_each_canonical(const ArrayValue &a, Fn &&fn) {
  if (!a.overlay)
    return;
  for (const auto &[idx, val] : *a.overlay)
    if (val != a.base_read(BitVec(a.index_width, idx)))
      fn(idx, val);
}

} // namespace

bool operator==(const ArrayValue &a, const ArrayValue &b) {
  if (a.base != b.base || a.index_width != b.index_width ||
      a.elem_width != b.elem_width)
    return false;
  std::vector<std::pair<WideInt, BitVec>> ca, cb;
  for_each_canonical(a, [&](const WideInt &i, const BitVec &v) {
    ca.emplace_back(i, v);
  });
  for_each_canonical(b, [&](const WideInt &i, const BitVec &v) {
    cb.emplace_back(i, v);
  });
  return ca == cb;
}

uint64_t ArrayValue::hash() const {
  uint64_t h = mix2(0xa8f1e2d3c4b59687ULL, base);
  h = mix2(h, fill ? fill->hash() : 0x51ULL);
  for_each_canonical(*this, [&](const WideInt &i, const BitVec &v) {
    h = mix2(h, wide_hash(i));
    h = mix2(h, v.hash());
  });
  return h;
}

bool value_eq(const Value &a, const Value &b) {
  if (a.index() != b.index())
    return false;
  if (std::holds_alternative<BitVec>(a))
    return std::get<BitVec>(a) == std::get<BitVec>(b);
  return std::get<ArrayValue>(a) == std::get<ArrayValue>(b);
}

uint64_t value_hash(const Value &v) {
  if (std::holds_alternative<BitVec>(v))
    return std::get<BitVec>(v).hash();
  return std::get<ArrayValue>(v).hash();
}

std::string value_str(const Value &v) {
  if (std::holds_alternative<BitVec>(v)) {
    const BitVec &b = std::get<BitVec>(v);
    return std::to_string(b.width()) + "'b" + b.to_binary();
  }
  const ArrayValue &a = std::get<ArrayValue>(v);
  std::string s = "array(";
  s += a.fill ? "fill=" + a.fill->to_binary() : "free";
  if (a.overlay)
    for (const auto &[i, val] : *a.overlay)
      s += ", [" + i.str() + "]=" + val.to_binary();
  return s + ")";
}

EvalPlan EvalPlan::build(const TermGraph &graph,
                         std::span<const TermId> roots) {
  EvalPlan plan;
  plan.order = graph.post_order(roots);
  plan.pos.reserve(plan.order.size());
  for (uint32_t i = 0; i < plan.order.size(); ++i)
    plan.pos.emplace(plan.order[i], i);
  return plan;
}

void eval_column(const TermGraph &graph, const EvalPlan &plan,
                 const std::unordered_map<TermId, Value> &leaves,
                 std::vector<Value> &out) {
  out.resize(plan.order.size());
  std::vector<BitVec> args;
  for (uint32_t i = 0; i < plan.order.size(); ++i) {
    TermId t = plan.order[i];
    const Term &n = graph.term(t);
    auto operand = [&](size_t k) -> const Value & {
      return out[plan.pos.at(n.operands[k])];
    };
    switch (n.op) {
    case Op::Symbol:
      out[i] = leaves.at(t);
      break;
    case Op::Const:
      out[i] = *n.value;
      break;
    case Op::ConstArray:
      out[i] = ArrayValue::constant(t, n.sort,
                                    std::get<BitVec>(operand(0)));
      break;
    case Op::Read:
      out[i] = std::get<ArrayValue>(operand(0))
                   .read(std::get<BitVec>(operand(1)));
      break;
    case Op::Write:
      out[i] = std::get<ArrayValue>(operand(0))
                   .written(std::get<BitVec>(operand(1)),
                            std::get<BitVec>(operand(2)));
      break;
    case Op::Ite:
      out[i] = std::get<BitVec>(operand(0)).is_zero() ? operand(2)
                                                      : operand(1);
      break;
    case Op::Eq:
    case Op::Neq:
      // Array equality compares the canonical content representation.
      // Distinct leaf bases count as different content, matching how the
      // pattern conceptually assigns each leaf its own fixed function.
      if (std::holds_alternative<ArrayValue>(operand(0))) {
        bool eq = value_eq(operand(0), operand(1));
        out[i] = BitVec(1, (n.op == Op::Eq) == eq ? 1 : 0);
        break;
      }
      [[fallthrough]];
    default: {
      args.clear();
      for (size_t k = 0; k < n.operands.size(); ++k)
        args.push_back(std::get<BitVec>(operand(k)));
      out[i] = apply_bitvec_op(n.op, args, n.attr0, n.attr1);
      break;
    }
    }
  }
}

Value eval(const TermGraph &graph, TermId term, const Pattern &p) {
  EvalPlan plan = EvalPlan::build(graph, {&term, 1});
  std::vector<Value> out;
  eval_column(graph, plan, p.leaves, out);
  return out[plan.pos.at(term)];
}

namespace {

// Union-find over leaves with a pinned constant per class.
struct LeafClasses {
  std::unordered_map<TermId, TermId> parent;
  std::unordered_map<TermId, BitVec> pin;

  TermId find(TermId t) {
    auto it = parent.find(t);
    if (it == parent.end())
      return t;
    TermId r = find(it->second);
    it->second = r;
    return r;
  }

  void unite(const TermGraph &graph, TermId a, TermId b) {
    TermId ra = find(a), rb = find(b);
    if (ra == rb)
      return;
    if (rb < ra)
      std::swap(ra, rb);
    std::optional<BitVec> va, vb;
    if (auto it = pin.find(ra); it != pin.end())
      va = it->second;
    if (auto it = pin.find(rb); it != pin.end())
      vb = it->second;
    if (va && vb && *va != *vb)
      throw ConflictingConstraintsError(
          "signals '" + graph.term(ra).symbol + "' and '" +
          graph.term(rb).symbol + "' are tied but pinned to " +
          va->to_binary() + " and " + vb->to_binary());
    pin.erase(rb);
    if (!va && vb)
      pin.emplace(ra, *vb);
    parent[rb] = ra;
  }

  void set_pin(const TermGraph &graph, TermId t, const BitVec &v) {
    TermId r = find(t);
    auto it = pin.find(r);
    if (it != pin.end() && it->second != v)
      throw ConflictingConstraintsError(
          "signal '" + graph.term(t).symbol + "' pinned to both " +
          it->second.to_binary() + " and " + v.to_binary());
    pin.emplace(r, v);
  }
};

void flatten_conjuncts(const TermGraph &graph, std::span<const TermId> roots,
                       std::vector<TermId> &out) {
  std::vector<TermId> stack(roots.begin(), roots.end());
  std::unordered_set<TermId> seen;
  while (!stack.empty()) {
    TermId t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second)
      continue;
    const Term &n = graph.term(t);
    if (n.op == Op::And && n.sort.is_bool()) {
      stack.push_back(n.operands[0]);
      stack.push_back(n.operands[1]);
    } else {
      out.push_back(t);
    }
  }
}

} // namespace

std::vector<Pattern> gen_patterns(const TermGraph &graph,
                                  std::span<const TermId> leaves,
                                  std::span<const TermId> constraint_roots,
                                  uint32_t count, uint64_t seed) {
  std::vector<TermId> sorted(leaves.begin(), leaves.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Structural guidance: eq(x, y) ties two leaves, eq(x, c) pins one.
  std::vector<TermId> conjuncts;
  flatten_conjuncts(graph, constraint_roots, conjuncts);
  LeafClasses cls;
  for (TermId c : conjuncts) {
    const Term &n = graph.term(c);
    if ((n.op != Op::Eq && n.op != Op::Iff) || n.operands.size() != 2)
      continue;
    const Term &x = graph.term(n.operands[0]);
    const Term &y = graph.term(n.operands[1]);
    if (x.op == Op::Symbol && y.op == Op::Symbol)
      cls.unite(graph, n.operands[0], n.operands[1]);
    else if (x.op == Op::Symbol && y.op == Op::Const)
      cls.set_pin(graph, n.operands[0], *y.value);
    else if (x.op == Op::Const && y.op == Op::Symbol)
      cls.set_pin(graph, n.operands[1], *x.value);
  }

  EvalPlan cplan = EvalPlan::build(graph, constraint_roots);
  std::vector<Value> cvals;

  std::vector<Pattern> patterns;
  patterns.reserve(count);
  for (uint32_t pi = 0; pi < count; ++pi) {
    std::mt19937_64 eng(mix2(seed, pi));
    Pattern p;
    std::unordered_map<TermId, Value> rep_value;
    for (TermId leaf : sorted) {
      TermId rep = cls.find(leaf);
      auto rit = rep_value.find(rep);
      if (rit == rep_value.end()) {
        Sort sort = graph.sort(rep);
        Value v;
        if (auto pit = cls.pin.find(rep); pit != cls.pin.end()) {
          v = pit->second;
        } else if (sort.is_bitvec()) {
          WideInt bits = 0;
          for (uint32_t done = 0; done < sort.width; done += 64)
            bits = (bits << 64) | eng();
          v = BitVec(sort.width, bits);
        } else {
          v = ArrayValue::leaf(rep, sort, mix2(mix2(seed, pi), rep));
        }
        rit = rep_value.emplace(rep, std::move(v)).first;
      }
      p.leaves.emplace(leaf, rit->second);
    }
    bool satisfied = true;
    eval_column(graph, cplan, p.leaves, cvals);
    for (TermId r : constraint_roots)
      if (std::get<BitVec>(cvals[cplan.pos.at(r)]).is_zero())
        satisfied = false;
    p.origin = satisfied ? Pattern::Origin::Constraint
                         : Pattern::Origin::Random;
    patterns.push_back(std::move(p));
  }
  return patterns;
}

SimMatrix::SimMatrix(const TermGraph &graph, std::span<const TermId> roots,
                     std::vector<Pattern> patterns)
    : graph_(graph), plan_(EvalPlan::build(graph, roots)),
      patterns_(std::move(patterns)) {
  rows_.resize(plan_.order.size());
  for (auto &row : rows_)
    row.reserve(patterns_.size() + 8);
  for (size_t c = 0; c < patterns_.size(); ++c)
    eval_into_column(patterns_[c], c);
  refresh_signatures();
}

void SimMatrix::eval_into_column(const Pattern &p, size_t col) {
  (void)col; // append position, consulted only by the assert below
  std::vector<Value> tmp;
  eval_column(graph_, plan_, p.leaves, tmp);
  for (size_t i = 0; i < rows_.size(); ++i) {
    assert(rows_[i].size() == col);
    rows_[i].push_back(std::move(tmp[i]));
  }
}

void SimMatrix::refresh_signatures() {
  sigs_.assign(plan_.order.size(), 0);
  for (size_t i = 0; i < plan_.order.size(); ++i) {
    uint64_t h = mix2(0x5157eefULL, SortHash{}(graph_.sort(plan_.order[i])));
    for (const Value &v : rows_[i])
      h = mix2(h, value_hash(v));
    sigs_[i] = h;
  }
}

std::optional<BitVec> SimMatrix::constant_row(TermId t) const {
  const auto &row = rows_[plan_.pos.at(t)];
  if (row.empty() || !std::holds_alternative<BitVec>(row[0]))
    return std::nullopt;
  for (size_t i = 1; i < row.size(); ++i)
    if (!value_eq(row[0], row[i]))
      return std::nullopt;
  return std::get<BitVec>(row[0]);
}

void SimMatrix::extend(const Pattern &cex) {
  patterns_.push_back(cex);
  patterns_.back().origin = Pattern::Origin::Counterexample;
  eval_into_column(patterns_.back(), patterns_.size() - 1);
  refresh_signatures();
}

} // namespace wsweep
