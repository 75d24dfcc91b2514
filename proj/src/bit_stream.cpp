#include "linext/bit_stream.hpp"

#include <cmath>
#include <stdexcept>

namespace linext {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

BitStream::BitStream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)) {
  key_ = splitmix64(splitmix64(seed_ + kGolden) ^ fnv1a(label_));
}

std::uint64_t BitStream::next_word() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

int BitStream::next_bit() {
  if (buffered_ == 0) {
    buffer_ = next_word();
    buffered_ = 64;
  }
  const int bit = static_cast<int>(buffer_ & 1U);
  buffer_ >>= 1;
  --buffered_;
  ++bits_;
  return bit;
}

std::uint64_t BitStream::uniform_int(std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("uniform_int: m must be at least 1");
  // Lumbroso's fast dice roller: (v, c) keeps c uniform on [0, v).
  std::uint64_t v = 1;
  std::uint64_t c = 0;
  while (true) {
    if (v >= m) {
      if (c < m) return c + 1;
      v -= m;
      c -= m;
    }
    v <<= 1;
    c = (c << 1) | static_cast<std::uint64_t>(next_bit());
  }
}

int BitStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
  }
  if (p == 1.0) return 1;
  // Return 1 iff the uniform U = 0.b1 b2 ... is below p, deciding at the
  // first bit where U and p differ. Doubling a double is exact.
  double rest = p;
  while (rest > 0.0) {
    rest *= 2.0;
    const int p_bit = rest >= 1.0 ? 1 : 0;
    rest -= p_bit;
    const int u_bit = next_bit();
    if (u_bit != p_bit) return u_bit < p_bit ? 1 : 0;
  }
  return 0;
}

double BitStream::uniform01() {
  continuous_bits_ += 53;
  return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

BitStream BitStream::fork(const std::string& child_label) {
  if (!forked_.insert(child_label).second) {
    throw std::invalid_argument("fork: label '" + child_label + "' already used");
  }
  return BitStream(seed_, label_ + "/" + child_label);
}

StepDraw draw_step(BitStream& stream, int n, double pen) {
  StepDraw d;
  d.i = static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(n - 1))) - 1;
  d.c1 = static_cast<std::uint8_t>(stream.bernoulli(0.5));
  d.c2 = static_cast<std::uint8_t>(stream.bernoulli(pen));
  return d;
}

}  // namespace linext
