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

#include "ragmark/digest.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "ragmark/error.h"

namespace ragmark {

Digest256 Sha256(std::span<const std::uint8_t> data) {
  Digest256 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error(ErrorCode::kIo, "EVP_Digest(sha256) failed");
  }
  return out;
}

Digest256 Sha256(std::string_view data) { return Sha256(AsBytes(data)); }

Digest256 HmacSha256(std::span<const std::uint8_t> key,
                     std::span<const std::uint8_t> message) {
  Digest256 out{};
  unsigned int len = 0;
  // OpenSSL rejects a null key pointer even for zero length.
  static const std::uint8_t kEmpty = 0;
  const std::uint8_t* key_ptr = key.empty() ? &kEmpty : key.data();
  if (HMAC(EVP_sha256(), key_ptr, static_cast<int>(key.size()),
           message.data(), message.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    throw Error(ErrorCode::kIo, "HMAC(sha256) failed");
  }
  return out;
}

Digest256 HmacSha256(std::span<const std::uint8_t> key, std::string_view message) {
  return HmacSha256(key, AsBytes(message));
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

std::uint64_t BigEndianMod(const Digest256& digest, std::uint64_t m) {
  // Horner's rule over bytes; each step stays below 2^72 in 128-bit.
  __extension__ using Wide = unsigned __int128;
  Wide acc = 0;
  for (auto b : digest) {
    acc = ((acc << 8) | b) % m;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t BigEndianPrefix64(const Digest256& digest) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | digest[i];
  return v;
}

}  // namespace ragmark
