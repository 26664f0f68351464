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

#ifndef DPROUTE_TYPES_HPP_
#define DPROUTE_TYPES_HPP_

#include <cstdint>
#include <string_view>

namespace dproute {

// Switch identifiers. 0 is the stack-bottom sentinel and never names a real
// switch. Domain ids and virtual border switches share this id space but use
// disjoint ranges (see hierarchy.hpp).
using SwitchId = std::uint16_t;
inline constexpr SwitchId kSentinel = 0;

// 1-based bit index into visited/failure vectors. Odd ids are the
// lower-endpoint -> higher-endpoint direction of a bidirectional link, the
// following even id is its reverse.
using LinkId = std::uint32_t;

// Id of the opposite direction of `id`.
constexpr LinkId reverse_link(LinkId id) noexcept {
  return (id % 2 == 1) ? id + 1 : id - 1;
}

enum class TraversalMode : std::uint8_t { kBfs = 0, kIddfs = 1 };

constexpr std::string_view to_string(TraversalMode m) noexcept {
  return m == TraversalMode::kBfs ? "bfs" : "iddfs";
}

TraversalMode parse_traversal_mode(std::string_view s);

}  // namespace dproute

#endif  // DPROUTE_TYPES_HPP_
