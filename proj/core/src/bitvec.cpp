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

#include "dproute/bitvec.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "dproute/errors.hpp"

namespace dproute {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t width) {
  return (width + kWordBits - 1) / kWordBits;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (c >= 'a' && c <= 'f') return 10 + (c - 'a');
  return -1;
}

}  // namespace

BitVec::BitVec(std::size_t width) : width_(width), words_(words_for(width), 0) {}

BitVec BitVec::with_bits(std::size_t width, std::initializer_list<LinkId> ids) {
  return with_bits(width, std::span<const LinkId>(ids.begin(), ids.size()));
}

BitVec BitVec::with_bits(std::size_t width, std::span<const LinkId> ids) {
  BitVec v(width);
  for (LinkId id : ids) v.set(id);
  return v;
}

BitVec BitVec::from_string(std::string_view bits) {
  std::string digits;
  for (char c : bits) {
    if (c == ' ' || c == '_') continue;
    if (c != '0' && c != '1') throw ParseError("bit string: unexpected character");
    digits.push_back(c);
  }
  BitVec v(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[digits.size() - 1 - i] == '1') v.set(static_cast<LinkId>(i + 1));
  }
  return v;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t width) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  BitVec v(width);
  std::size_t bit = 1;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
    int d = hex_value(*it);
    if (d < 0) throw ParseError("hex bit string: unexpected character");
    for (int b = 0; b < 4; ++b, ++bit) {
      if ((d >> b) & 1) {
        if (bit > width) throw ParseError("hex bit string wider than field");
        v.set(static_cast<LinkId>(bit));
      }
    }
  }
  return v;
}

void BitVec::check_id(LinkId id) const {
  if (id == 0 || id > width_) {
    throw UnknownLink("link id " + std::to_string(id) + " outside vector width " +
                      std::to_string(width_));
  }
}

void BitVec::check_width(const BitVec& other) const {
  if (other.width_ != width_) {
    throw WidthMismatch("bit vector widths differ: " + std::to_string(width_) +
                        " vs " + std::to_string(other.width_));
  }
}

void BitVec::trim() noexcept {
  std::size_t rem = width_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

bool BitVec::test(LinkId id) const {
  check_id(id);
  std::size_t i = id - 1;
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

BitVec& BitVec::set(LinkId id, bool value) {
  check_id(id);
  std::size_t i = id - 1;
  std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
  return *this;
}

void BitVec::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

bool BitVec::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t BitVec::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVec::contains_all(const BitVec& mask) const {
  check_width(mask);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & mask.words_[i]) != mask.words_[i]) return false;
  }
  return true;
}

bool BitVec::matches(const BitVec& value, const BitVec& mask) const {
  check_width(mask);
  check_width(value);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & mask.words_[i]) != value.words_[i]) return false;
  }
  return true;
}

BitVec& BitVec::operator|=(const BitVec& other) {
  check_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
  check_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVec BitVec::operator~() const {
  BitVec out(*this);
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

bool operator==(const BitVec& a, const BitVec& b) noexcept {
  return a.width_ == b.width_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
}

std::vector<LinkId> BitVec::set_bits() const {
  std::vector<LinkId> ids;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      int b = std::countr_zero(word);
      ids.push_back(static_cast<LinkId>(w * kWordBits + static_cast<std::size_t>(b) + 1));
      word &= word - 1;
    }
  }
  return ids;
}

std::string BitVec::to_string(std::size_t group) const {
  std::string out;
  for (std::size_t pos = width_; pos >= 1; --pos) {
    out.push_back(test(static_cast<LinkId>(pos)) ? '1' : '0');
    if (group != 0 && pos > 1 && (pos - 1) % group == 0) out.push_back(' ');
  }
  return out;
}

std::string BitVec::to_ternary_string(const BitVec& mask) const {
  check_width(mask);
  std::string out;
  out.reserve(width_);
  for (std::size_t pos = width_; pos >= 1; --pos) {
    auto id = static_cast<LinkId>(pos);
    out.push_back(!mask.test(id) ? '*' : (test(id) ? '1' : '0'));
  }
  return out;
}

std::string BitVec::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::size_t nibbles = std::max<std::size_t>(1, (width_ + 3) / 4);
  std::string out = "0x";
  for (std::size_t n = nibbles; n-- > 0;) {
    std::size_t bit = n * 4;
    std::uint64_t v = (word(bit / kWordBits) >> (bit % kWordBits)) & 0xF;
    out.push_back(kDigits[v]);
  }
  return out;
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
  std::size_t nbytes = (width_ + 7) / 8;
  std::vector<std::uint8_t> out(nbytes, 0);
  for (std::size_t b = 0; b < nbytes; ++b) {
    std::size_t bit = b * 8;
    out[nbytes - 1 - b] =
        static_cast<std::uint8_t>((words_[bit / kWordBits] >> (bit % kWordBits)) & 0xFF);
  }
  return out;
}

BitVec BitVec::from_bytes(std::span<const std::uint8_t> bytes, std::size_t width) {
  std::size_t nbytes = (width + 7) / 8;
  if (bytes.size() != nbytes) throw TruncatedHeader("bit vector byte image has wrong length");
  BitVec v(width);
  for (std::size_t b = 0; b < nbytes; ++b) {
    std::size_t bit = b * 8;
    v.words_[bit / kWordBits] |= std::uint64_t{bytes[nbytes - 1 - b]} << (bit % kWordBits);
  }
  BitVec trimmed = v;
  trimmed.trim();
  if (!(trimmed == v)) throw ParseError("bit vector padding bits are set");
  return v;
}

}  // namespace dproute
