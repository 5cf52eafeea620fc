// SPDX-License-Identifier: Apache-2.0
//
// Arbitrary-width bit-vector values. The stored integer is always the
// unsigned canonical form: 0 <= bits < 2^width.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <string>

namespace wsweep {

using WideInt = boost::multiprecision::cpp_int;

class BitVec {
public:
  BitVec() : width_(1), bits_(0) {}

  BitVec(uint32_t width, WideInt bits) : width_(width), bits_(std::move(bits)) {
    assert(width >= 1);
    reduce();
  }

  static BitVec zero(uint32_t width) { return BitVec(width, 0); }
  static BitVec one(uint32_t width) { return BitVec(width, 1); }
  static BitVec ones(uint32_t width) {
    return BitVec(width, (WideInt(1) << width) - 1);
  }
  static BitVec from_u64(uint32_t width, uint64_t v) {
    return BitVec(width, WideInt(v));
  }

  // Parses "0"/"1" strings, most significant bit first. Returns false into
  // `ok` on any non-binary character or length mismatch.
  static BitVec from_binary(uint32_t width, const std::string &s, bool &ok) {
    ok = s.size() == width && width >= 1;
    WideInt v = 0;
    for (char c : s) {
      if (c != '0' && c != '1') {
        ok = false;
        break;
      }
      v = (v << 1) | (c == '1' ? 1 : 0);
    }
    return ok ? BitVec(width, v) : BitVec::zero(width ? width : 1);
  }

  uint32_t width() const { return width_; }
  const WideInt &uvalue() const { return bits_; }

  // Two's complement reading of the stored bits.
  WideInt svalue() const {
    if (width_ > 0 && bit(width_ - 1))
      return bits_ - (WideInt(1) << width_);
    return bits_;
  }

  bool bit(uint32_t i) const {
    assert(i < width_);
    return boost::multiprecision::bit_test(bits_, i);
  }

  bool is_zero() const { return bits_ == 0; }
  bool is_ones() const { return bits_ == (WideInt(1) << width_) - 1; }

  uint64_t to_u64() const {
    assert(bits_ <= WideInt(UINT64_MAX));
    return bits_.convert_to<uint64_t>();
  }

  std::string to_binary() const {
    std::string s(width_, '0');
    for (uint32_t i = 0; i < width_; ++i)
      if (bit(i))
        s[width_ - 1 - i] = '1';
    return s;
  }

  friend bool operator==(const BitVec &a, const BitVec &b) {
    return a.width_ == b.width_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const BitVec &a, const BitVec &b) { return !(a == b); }

  uint64_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ width_;
    WideInt v = bits_;
    while (v != 0) {
      h = (h ^ v.convert_to<uint64_t>()) * 0x100000001b3ULL;
      v >>= 64;
    }
    return h;
  }

private:
  // Canonicalizes to 0 <= bits < 2^width. cpp_int is sign-magnitude, so
  // negative inputs wrap via modulus rather than bit masking.
  void reduce() {
    WideInt m = WideInt(1) << width_;
    if (bits_ < 0 || bits_ >= m) {
      bits_ %= m;
      if (bits_ < 0)
        bits_ += m;
    }
  }

  uint32_t width_;
  WideInt bits_;
};

} // namespace wsweep
