// SPDX-License-Identifier: Apache-2.0
//
// Sorts for the word-level term graph: fixed-width bit-vectors and
// one-dimensional arrays over bit-vector index/element sorts.

#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <string>

namespace wsweep {

struct Sort {
  enum class Kind : uint8_t { BitVec, Array };

  Kind kind = Kind::BitVec;
  uint32_t width = 1;        // BitVec only
  uint32_t index_width = 0;  // Array only
  uint32_t elem_width = 0;   // Array only

  static Sort bitvec(uint32_t w) {
    assert(w >= 1);
    Sort s;
    s.kind = Kind::BitVec;
    s.width = w;
    return s;
  }

  // No nested arrays: index and element sorts are bit-vectors.
  static Sort array(uint32_t index_w, uint32_t elem_w) {
    assert(index_w >= 1 && elem_w >= 1);
    Sort s;
    s.kind = Kind::Array;
    s.width = 0;
    s.index_width = index_w;
    s.elem_width = elem_w;
    return s;
  }

  bool is_bitvec() const { return kind == Kind::BitVec; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_bool() const { return is_bitvec() && width == 1; }

  friend bool operator==(const Sort &a, const Sort &b) {
    if (a.kind != b.kind)
      return false;
    if (a.kind == Kind::BitVec)
      return a.width == b.width;
    return a.index_width == b.index_width && a.elem_width == b.elem_width;
  }
  friend bool operator!=(const Sort &a, const Sort &b) { return !(a == b); }

  std::string str() const {
    if (is_bitvec())
      return "bitvec " + std::to_string(width);
    return "array " + std::to_string(index_width) + " " +
           std::to_string(elem_width);
  }
};

struct SortHash {
  size_t operator()(const Sort &s) const {
    uint64_t h = s.kind == Sort::Kind::BitVec
                     ? (uint64_t(s.width) << 1)
                     : ((uint64_t(s.index_width) << 32) |
                        (uint64_t(s.elem_width) << 1) | 1u);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return size_t(h);
  }
};

} // namespace wsweep
