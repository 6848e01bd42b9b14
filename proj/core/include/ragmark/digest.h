// Copyright 2026 The ragmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAGMARK_DIGEST_H_
#define RAGMARK_DIGEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragmark {

using Digest256 = std::array<std::uint8_t, 32>;

Digest256 Sha256(std::span<const std::uint8_t> data);
Digest256 Sha256(std::string_view data);

Digest256 HmacSha256(std::span<const std::uint8_t> key,
                     std::span<const std::uint8_t> message);
Digest256 HmacSha256(std::span<const std::uint8_t> key, std::string_view message);

std::string ToHex(std::span<const std::uint8_t> bytes);

/// Lower/upper case accepted; returns nullopt on odd length or a non-hex digit.
std::optional<std::vector<std::uint8_t>> FromHex(std::string_view hex);

/// Full 32-byte digest read as a big-endian unsigned integer, reduced mod m.
/// m must be nonzero.
std::uint64_t BigEndianMod(const Digest256& digest, std::uint64_t m);

/// First eight digest bytes as a big-endian integer.
std::uint64_t BigEndianPrefix64(const Digest256& digest);

inline std::span<const std::uint8_t> AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace ragmark

#endif  // RAGMARK_DIGEST_H_
