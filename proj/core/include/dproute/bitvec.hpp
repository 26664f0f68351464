/* Copyright 2026 The dproute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DPROUTE_BITVEC_HPP_
#define DPROUTE_BITVEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dproute/types.hpp"

namespace dproute {

// Fixed-width bit string indexed by LinkId (1-based, bit 1 is the rightmost
// bit when printed). Used for visited vectors, failure vectors, link masks
// and ternary match values.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t width);

  // Builds a vector of `width` with exactly the listed ids set.
  static BitVec with_bits(std::size_t width, std::initializer_list<LinkId> ids);
  static BitVec with_bits(std::size_t width, std::span<const LinkId> ids);

  // Parses the MSB-first form produced by to_string(); spaces are ignored.
  static BitVec from_string(std::string_view bits);
  // Parses "0x..." hex (MSB first) into a vector of the given width.
  static BitVec from_hex(std::string_view hex, std::size_t width);

  std::size_t width() const noexcept { return width_; }

  bool test(LinkId id) const;
  BitVec& set(LinkId id, bool value = true);
  BitVec& reset(LinkId id) { return set(id, false); }
  void clear() noexcept;

  bool any() const noexcept;
  bool none() const noexcept { return !any(); }
  std::size_t count() const noexcept;

  // True when every bit set in `mask` is also set here.
  bool contains_all(const BitVec& mask) const;
  // Ternary compare: (*this & mask) == value.
  bool matches(const BitVec& value, const BitVec& mask) const;

  BitVec& operator|=(const BitVec& other);
  BitVec& operator&=(const BitVec& other);
  BitVec operator~() const;
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend bool operator==(const BitVec& a, const BitVec& b) noexcept;

  // Ids of the set bits in ascending order.
  std::vector<LinkId> set_bits() const;

  // MSB-first, e.g. "00000011" for bits {1,2} at width 8. With `group` > 0 a
  // space is inserted every `group` characters counting from the right.
  std::string to_string(std::size_t group = 0) const;
  // Renders a ternary pattern: '*' where `mask` is clear, value bit elsewhere.
  std::string to_ternary_string(const BitVec& mask) const;
  // "0x" followed by ceil(width/4) hex digits, MSB first.
  std::string to_hex() const;

  // Big-endian byte image, ceil(width/8) bytes, bit 1 is the LSB of the last
  // byte. Padding bits are zero.
  std::vector<std::uint8_t> to_bytes() const;
  static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t width);

  std::span<const std::uint64_t> words() const noexcept {
    return {words_.data(), words_.size()};
  }
  std::uint64_t word(std::size_t i) const noexcept {
    return i < words_.size() ? words_[i] : 0;
  }

 private:
  void check_id(LinkId id) const;
  void check_width(const BitVec& other) const;
  void trim() noexcept;

  std::size_t width_ = 0;
  boost::container::small_vector<std::uint64_t, 4> words_;
};

}  // namespace dproute

#endif  // DPROUTE_BITVEC_HPP_
