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

#include "oracles.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace ragmark::oracle {
namespace {

constexpr std::uint32_t kRoundConstants[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2,
};

std::uint32_t Rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

Bytes Concat(const Bytes& a, const Bytes& b) {
  Bytes out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Bytes Sep() { return Bytes{0x1F}; }

using boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// x = num / 2^shift exactly.
std::pair<cpp_int, unsigned> ExactDouble(double x) {
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, mant in [0.5, 1)
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  return {cpp_int(m), static_cast<unsigned>(53 - exp)};
}

}  // namespace

Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

Bytes HexToBytes(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex");
  };
  Bytes out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

std::string Hex(const Digest& d) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : d) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

Digest Sha256(const Bytes& message) {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  Bytes m = message;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(message.size()) * 8;
  m.push_back(0x80);
  while (m.size() % 64 != 56) m.push_back(0);
  for (int i = 7; i >= 0; --i) m.push_back(static_cast<std::uint8_t>(bit_len >> (8 * i)));

  for (std::size_t block = 0; block < m.size(); block += 64) {
    std::uint32_t w[64];
    for (int t = 0; t < 16; ++t) {
      w[t] = (std::uint32_t{m[block + 4 * t]} << 24) | (std::uint32_t{m[block + 4 * t + 1]} << 16) |
             (std::uint32_t{m[block + 4 * t + 2]} << 8) | std::uint32_t{m[block + 4 * t + 3]};
    }
    for (int t = 16; t < 64; ++t) {
      const std::uint32_t s0 = Rotr(w[t - 15], 7) ^ Rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
      const std::uint32_t s1 = Rotr(w[t - 2], 17) ^ Rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
      w[t] = w[t - 16] + s0 + w[t - 7] + s1;
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                  hh = h[7];
    for (int t = 0; t < 64; ++t) {
      const std::uint32_t S1 = Rotr(e, 6) ^ Rotr(e, 11) ^ Rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + S1 + ch + kRoundConstants[t] + w[t];
      const std::uint32_t S0 = Rotr(a, 2) ^ Rotr(a, 13) ^ Rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = S0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }
  Digest out{};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 4; ++j) out[4 * i + j] = static_cast<std::uint8_t>(h[i] >> (24 - 8 * j));
  }
  return out;
}

Digest HmacSha256(const Bytes& key, const Bytes& message) {
  Bytes k = key;
  if (k.size() > 64) {
    const auto d = Sha256(k);
    k.assign(d.begin(), d.end());
  }
  k.resize(64, 0);
  Bytes ipad(64), opad(64);
  for (int i = 0; i < 64; ++i) {
    ipad[i] = k[i] ^ 0x36;
    opad[i] = k[i] ^ 0x5c;
  }
  const auto inner = Sha256(Concat(ipad, message));
  return Sha256(Concat(opad, Bytes(inner.begin(), inner.end())));
}

std::uint64_t ModBigEndian(const Digest& d, std::uint32_t m) {
  std::uint64_t rem = 0;
  for (auto byte : d) rem = (rem * 256 + byte) % m;
  return rem;
}

std::size_t NextIndex(const Bytes& key, std::string_view entity, std::size_t e_size) {
  return ModBigEndian(HmacSha256(key, ToBytes(entity)), static_cast<std::uint32_t>(e_size));
}

bool Exists(const Bytes& key, std::string_view a, std::string_view b, double p) {
  Bytes msg = Concat(Concat(Concat(Concat(ToBytes(a), Sep()), ToBytes(b)), Sep()),
                     ToBytes("exist"));
  const auto d = HmacSha256(key, msg);
  long double u = 0;
  for (int i = 0; i < 8; ++i) u = u * 256 + d[i];
  u /= 18446744073709551616.0L;
  return u < p;
}

std::size_t RelationIdx(const Bytes& key, std::string_view a, std::string_view b,
                        std::size_t r_size) {
  const auto d = HmacSha256(key, Concat(Concat(ToBytes(a), Sep()), ToBytes(b)));
  return ModBigEndian(d, static_cast<std::uint32_t>(r_size));
}

double ExactUpperTail(unsigned n, unsigned c, double p0) {
  // p0 = a / d exactly, so P(X >= c) = sum C(n,i) a^i (d-a)^(n-i) / d^n.
  const auto [a, shift] = ExactDouble(p0);
  const cpp_int d = cpp_int(1) << shift;
  const cpp_int b = d - a;
  cpp_int numerator = 0;
  for (unsigned i = c; i <= n; ++i) {
    cpp_int choose = 1;
    for (unsigned j = 0; j < i; ++j) choose = choose * (n - j) / (j + 1);
    cpp_int term = choose;
    for (unsigned j = 0; j < i; ++j) term *= a;
    for (unsigned j = 0; j < n - i; ++j) term *= b;
    numerator += term;
  }
  cpp_int denominator = 1;
  for (unsigned j = 0; j < n; ++j) denominator *= d;
  return static_cast<double>(Rational(numerator, denominator));
}

std::vector<double> TrigramEmbed(std::string_view text, std::size_t dim) {
  std::string s = " ";
  for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  s += " ";
  std::vector<double> v(dim, 0.0);
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a offset basis
    for (int j = 0; j < 3; ++j) {
      h = (h ^ static_cast<unsigned char>(s[i + j])) * 1099511628211ULL;
    }
    v[h % dim] += 1.0;
  }
  double sq = 0;
  for (std::size_t i = 0; i < dim; ++i) sq += v[i] * v[i];
  const double norm = std::sqrt(sq);
  if (norm > 0) {
    for (std::size_t i = 0; i < dim; ++i) v[i] = v[i] / norm;
  }
  return v;
}

double Score(Metric m, const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0, d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
    d2 += (a[i] - b[i]) * (a[i] - b[i]);
  }
  switch (m) {
    case Metric::kInnerProduct:
      return dot;
    case Metric::kCosine:
      return (na == 0 || nb == 0) ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
    case Metric::kEuclidean:
      return -std::sqrt(d2);
  }
  return 0;
}

std::vector<std::string> BruteForceTopK(
    const std::vector<std::pair<std::string, std::string>>& id_text, std::string_view query,
    Metric metric, std::size_t k, std::size_t dim) {
  const auto q = TrigramEmbed(query, dim);
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& [id, text] : id_text) {
    scored.emplace_back(Score(metric, q, TrigramEmbed(text, dim)), id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<std::size_t> FisherYatesIndices(std::size_t n, std::size_t count,
                                            std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto below = [&gen](std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    for (;;) {
      const std::uint64_t x = gen();
      if (x < limit) return x % bound;
    }
  };
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count && i < n; ++i) {
    std::swap(idx[i], idx[i + below(n - i)]);
  }
  idx.resize(std::min(count, n));
  return idx;
}

}  // namespace ragmark::oracle
