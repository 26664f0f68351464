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

#include "dproute/wire.hpp"

#include <cstdio>
#include <sstream>

#include "dproute/errors.hpp"

namespace dproute {

namespace {

constexpr std::uint8_t kFlagExhausted = 1 << 0;
constexpr std::uint8_t kFlagHierarchy = 1 << 1;
constexpr std::uint8_t kFlagFlat = 1 << 2;
constexpr std::uint8_t kFlagDomainValid = 1 << 3;
constexpr std::uint8_t kFlagStackSel = 1 << 4;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  void bits(const BitVec& v) {
    auto b = v.to_bytes();
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void path(const Path& p) {
    u8(p.capacity());
    u16(p.length());
    for (SwitchId s : p.hops()) u16(s);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

struct Mark {
  std::size_t offset;
  std::string label;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, std::vector<Mark>* marks) : in_(in), marks_(marks) {}

  void mark(std::string label) {
    if (marks_) marks_->push_back({pos_, std::move(label)});
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  BitVec bits(std::size_t width) {
    std::size_t n = (width + 7) / 8;
    need(n);
    auto v = BitVec::from_bytes(in_.subspan(pos_, n), width);
    pos_ += n;
    return v;
  }
  Path path() {
    std::uint8_t cap = u8();
    std::uint16_t len = u16();
    std::size_t stored = std::min<std::size_t>(cap, len);
    std::vector<SwitchId> hops(stored);
    for (auto& s : hops) s = u16();
    Path p(cap);
    p.assign(cap, len, hops);
    return p;
  }
  bool done() const noexcept { return pos_ == in_.size(); }
  std::size_t pos() const noexcept { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) {
      throw TruncatedHeader("header truncated at byte " + std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::vector<Mark>* marks_;
};

void write_policy(Writer& w, const PolicyBlock& p) {
  w.u8(static_cast<std::uint8_t>(p.traversal_mode));
  w.u8(static_cast<std::uint8_t>(p.mbox_chain.size()));
  for (const auto& set : p.mbox_chain) {
    w.u8(static_cast<std::uint8_t>(set.size()));
    for (SwitchId s : set) w.u16(s);
  }
  w.u8(p.chain_cursor);
  w.u8(static_cast<std::uint8_t>(p.prefs.size()));
  for (const auto& e : p.prefs) {
    w.u16(e.sw);
    w.u8(e.pref);
  }
  w.u8(static_cast<std::uint8_t>(p.wcmp.size()));
  for (const auto& e : p.wcmp) {
    w.u16(e.sw);
    w.u8(static_cast<std::uint8_t>(e.next_hops.size()));
    for (SwitchId s : e.next_hops) w.u16(s);
    for (std::uint32_t x : e.weights) w.u32(x);
  }
}

PolicyBlock read_policy(Reader& r) {
  PolicyBlock p;
  p.traversal_mode = static_cast<TraversalMode>(r.u8() & 1);
  p.mbox_chain.resize(r.u8());
  for (auto& set : p.mbox_chain) {
    set.resize(r.u8());
    for (auto& s : set) s = r.u16();
  }
  p.chain_cursor = r.u8();
  p.prefs.resize(r.u8());
  for (auto& e : p.prefs) {
    e.sw = r.u16();
    e.pref = r.u8();
  }
  p.wcmp.resize(r.u8());
  for (auto& e : p.wcmp) {
    e.sw = r.u16();
    std::size_t n = r.u8();
    e.next_hops.resize(n);
    e.weights.resize(n);
    for (auto& s : e.next_hops) s = r.u16();
    for (auto& x : e.weights) x = r.u32();
  }
  return p;
}

Decoded decode_impl(std::span<const std::uint8_t> bytes, std::optional<std::uint32_t> expect,
                    std::vector<Mark>* marks) {
  Reader r(bytes, marks);
  r.mark("magic+version+scope");
  std::uint8_t m0 = r.u8();
  std::uint8_t m1 = r.u8();
  if (m0 != kWireMagic0 || m1 != kWireMagic1) throw VersionMismatch("bad header magic");
  std::uint8_t version = r.u8();
  if (version != kWireVersion) {
    throw VersionMismatch("header version " + std::to_string(version) + " unsupported");
  }
  Decoded d;
  std::uint8_t scope = r.u8();
  if (scope > 1) throw ParseError("unknown header scope " + std::to_string(scope));
  d.scope = static_cast<WireScope>(scope);
  r.mark("fingerprint+width");
  d.fingerprint = r.u32();
  if (expect && *expect != d.fingerprint) {
    throw VersionMismatch("header was built for a different topology");
  }
  std::size_t width = r.u16();

  PacketHeader& h = d.header;
  r.mark("flow: src final_dst flow_id mode");
  h.src = r.u16();
  h.final_dst = r.u16();
  h.flow_id = r.u32();
  h.mode = static_cast<TraversalMode>(r.u8() & 1);
  r.mark("target: curr dst[] origin home");
  h.curr = r.u16();
  std::uint8_t ndst = r.u8();
  if (ndst > kMaxDst) throw ParseError("dst list longer than 4");
  for (std::uint8_t i = 0; i < ndst; ++i) h.dst.push_back(r.u16());
  h.origin = r.u16();
  h.home = r.u16();
  r.mark("flags len max_len cap explored");
  std::uint8_t flags = r.u8();
  h.exhausted = flags & kFlagExhausted;
  h.hierarchy = (flags & kFlagHierarchy) ? 1 : 0;
  h.flat = flags & kFlagFlat;
  h.domain_valid = flags & kFlagDomainValid;
  h.stack_sel = (flags & kFlagStackSel) ? 1 : 0;
  h.len = r.i16();
  h.max_len = r.u16();
  h.max_len_cap = r.u16();
  h.explored = r.u32();
  r.mark("path");
  h.path = r.path();
  h.path_cursor = r.u8();
  h.path_base = r.u16();
  r.mark("domain path");
  h.domain_path = r.path();
  h.domain_cursor = r.u8();
  h.target_cursor = r.u8();
  r.mark("fail_vec");
  h.fail = r.bits(width);
  r.mark("visited_vec");
  h.visited = r.bits(width);
  if (d.scope == WireScope::kRecirculation) {
    r.mark("visited_init");
    h.visited_init = r.bits(width);
    for (int s = 0; s < 2; ++s) {
      r.mark("bfs stack " + std::to_string(s));
      std::uint16_t n = r.u16();
      h.bfs_stacks[s].resize(n);
      for (auto& e : h.bfs_stacks[s]) {
        e.sw = r.u16();
        e.len = r.i16();
        e.path = r.path();
      }
    }
    r.mark("dfs stack");
    h.dfs_stack.resize(r.u16());
    for (auto& s : h.dfs_stack) s = r.u16();
  } else {
    h.visited_init = BitVec(width);
  }
  r.mark("policy");
  h.policy = read_policy(r);
  r.mark("resolved prefs");
  h.resolved_prefs.resize(r.u8());
  for (auto& e : h.resolved_prefs) {
    e.sw = r.u16();
    e.pref = r.u8();
  }
  if (!r.done()) throw ParseError("trailing bytes after header");
  return d;
}

}  // namespace

std::vector<std::uint8_t> encode(const PacketHeader& h, std::uint32_t fingerprint,
                                 WireScope scope) {
  Writer w;
  w.u8(kWireMagic0);
  w.u8(kWireMagic1);
  w.u8(kWireVersion);
  w.u8(static_cast<std::uint8_t>(scope));
  w.u32(fingerprint);
  w.u16(static_cast<std::uint16_t>(h.fail.width()));
  w.u16(h.src);
  w.u16(h.final_dst);
  w.u32(h.flow_id);
  w.u8(static_cast<std::uint8_t>(h.mode));
  w.u16(h.curr);
  w.u8(static_cast<std::uint8_t>(h.dst.size()));
  for (SwitchId s : h.dst) w.u16(s);
  w.u16(h.origin);
  w.u16(h.home);
  std::uint8_t flags = 0;
  if (h.exhausted) flags |= kFlagExhausted;
  if (h.hierarchy) flags |= kFlagHierarchy;
  if (h.flat) flags |= kFlagFlat;
  if (h.domain_valid) flags |= kFlagDomainValid;
  if (h.stack_sel) flags |= kFlagStackSel;
  w.u8(flags);
  w.i16(h.len);
  w.u16(h.max_len);
  w.u16(h.max_len_cap);
  w.u32(h.explored);
  w.path(h.path);
  w.u8(h.path_cursor);
  w.u16(h.path_base);
  w.path(h.domain_path);
  w.u8(h.domain_cursor);
  w.u8(h.target_cursor);
  w.bits(h.fail);
  if (h.visited.width() != h.fail.width()) throw WidthMismatch("visited/fail width differ");
  w.bits(h.visited);
  if (scope == WireScope::kRecirculation) {
    if (h.visited_init.width() != h.fail.width()) throw WidthMismatch("visited_init width differs");
    w.bits(h.visited_init);
    for (const auto& stack : h.bfs_stacks) {
      w.u16(static_cast<std::uint16_t>(stack.size()));
      for (const auto& e : stack) {
        w.u16(e.sw);
        w.i16(e.len);
        w.path(e.path);
      }
    }
    w.u16(static_cast<std::uint16_t>(h.dfs_stack.size()));
    for (SwitchId s : h.dfs_stack) w.u16(s);
  }
  write_policy(w, h.policy);
  w.u8(static_cast<std::uint8_t>(h.resolved_prefs.size()));
  for (const auto& e : h.resolved_prefs) {
    w.u16(e.sw);
    w.u8(e.pref);
  }
  return w.take();
}

Decoded decode(std::span<const std::uint8_t> bytes, std::optional<std::uint32_t> expect) {
  return decode_impl(bytes, expect, nullptr);
}

std::string annotated_hex(std::span<const std::uint8_t> bytes) {
  std::vector<Mark> marks;
  decode_impl(bytes, std::nullopt, &marks);
  std::ostringstream os;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    std::size_t begin = marks[i].offset;
    std::size_t end = i + 1 < marks.size() ? marks[i + 1].offset : bytes.size();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zx  ", begin);
    os << buf;
    for (std::size_t j = begin; j < end; ++j) {
      std::snprintf(buf, sizeof buf, "%02x", bytes[j]);
      os << buf;
      if (j + 1 < end) os << ' ';
    }
    os << "  ; " << marks[i].label << '\n';
  }
  return os.str();
}

}  // namespace dproute
