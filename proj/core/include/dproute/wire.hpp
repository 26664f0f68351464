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

#ifndef DPROUTE_WIRE_HPP_
#define DPROUTE_WIRE_HPP_

// Byte layout of PacketHeader. All integers are big-endian.
//
//   magic "D2" | version | scope | topology fingerprint (4) | width (2)
//   flow, target and cursor fields | path | domain path
//   fail vector | visited vector              (ceil(width/8) bytes each)
//   [recirculation scope only] visited_init, both BFS stacks, DFS stack
//   policy block | resolved preferences
//
// The inter-switch scope leaves out the traversal stacks and visited_init:
// they only matter while a switch is still computing a route.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dproute/header.hpp"

namespace dproute {

inline constexpr std::uint8_t kWireMagic0 = 0x44;  // 'D'
inline constexpr std::uint8_t kWireMagic1 = 0x32;  // '2'
inline constexpr std::uint8_t kWireVersion = 1;

enum class WireScope : std::uint8_t { kInterSwitch = 0, kRecirculation = 1 };

std::vector<std::uint8_t> encode(const PacketHeader& h, std::uint32_t fingerprint,
                                 WireScope scope = WireScope::kRecirculation);

struct Decoded {
  PacketHeader header;
  std::uint32_t fingerprint = 0;
  WireScope scope = WireScope::kRecirculation;
};

// Throws TruncatedHeader, VersionMismatch (bad magic/version or, when
// `expect_fingerprint` is given, a header built for another topology) and
// ParseError for malformed contents.
Decoded decode(std::span<const std::uint8_t> bytes,
               std::optional<std::uint32_t> expect_fingerprint = std::nullopt);

// Hex dump with one annotated line per field group, for `route --dump-header`.
std::string annotated_hex(std::span<const std::uint8_t> bytes);

}  // namespace dproute

#endif  // DPROUTE_WIRE_HPP_
