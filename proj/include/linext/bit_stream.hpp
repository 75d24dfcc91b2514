#ifndef LINEXT_BIT_STREAM_HPP
#define LINEXT_BIT_STREAM_HPP

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace linext {

// Deterministic bit source keyed by (seed, label) with exact accounting.
//
// Discrete draws (next_bit, uniform_int, bernoulli) pull single bits and are
// tallied in bits_consumed(). Continuous uniforms take 53 fresh bits each and
// are tallied separately in continuous_bits(), so the discrete tally is the
// chain-driving budget alone.
//
// A stream is single-threaded. Use fork() with distinct labels to hand out
// independent streams to parallel workers.
class BitStream {
 public:
  explicit BitStream(std::uint64_t seed, std::string label = "root");

  int next_bit();

  // Uniform on {1, ..., m} via the fast dice roller; expected bits are at
  // most ceil(log2 m) + 2 and exactly log2 m when m is a power of two.
  std::uint64_t uniform_int(std::uint64_t m);

  // 1 with probability p, by comparing fresh bits against the binary
  // expansion of p. p in {0, 1} costs nothing, p = 1/2 costs one bit.
  int bernoulli(double p);

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  // Child stream keyed by (seed, label() + "/" + child_label). Throws
  // std::invalid_argument if this stream already forked that label.
  BitStream fork(const std::string& child_label);

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t bits_consumed() const { return bits_; }
  std::uint64_t continuous_bits() const { return continuous_bits_; }

 private:
  std::uint64_t next_word();

  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t buffer_ = 0;
  int buffered_ = 0;
  std::uint64_t bits_ = 0;
  std::uint64_t continuous_bits_ = 0;
  std::set<std::string> forked_;
};

// One step's worth of randomness for the adjacent-transposition chain.
// `i` is the 0-based left position of the adjacent pair, in [0, n - 2].
struct StepDraw {
  int i = 0;
  std::uint8_t c1 = 0;
  std::uint8_t c2 = 0;

  friend bool operator==(const StepDraw&, const StepDraw&) = default;
};

// Draws i uniformly, then c1 ~ Bern(1/2), then c2 ~ Bern(pen), in that order.
// Requires n >= 2 and pen in (0, 1].
StepDraw draw_step(BitStream& stream, int n, double pen);

// Recorded draws of one CFTP level. Immutable once built.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(std::vector<StepDraw> draws) : draws_(std::move(draws)) {}

  std::span<const StepDraw> draws() const { return draws_; }
  std::size_t size() const { return draws_.size(); }
  const StepDraw& operator[](std::size_t j) const { return draws_[j]; }

 private:
  std::vector<StepDraw> draws_;
};

}  // namespace linext

#endif
