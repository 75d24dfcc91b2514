#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "linext/bit_stream.hpp"
#include "linext/statistics.hpp"

using namespace linext;

namespace {

std::vector<int> first_bits(BitStream s, int count) {
  std::vector<int> bits;
  for (int i = 0; i < count; ++i) bits.push_back(s.next_bit());
  return bits;
}

}  // namespace

TEST_CASE("next_bit is deterministic and counted") {
  CHECK(first_bits(BitStream(42), 200) == first_bits(BitStream(42), 200));
  CHECK(first_bits(BitStream(42), 200) != first_bits(BitStream(43), 200));
  CHECK(first_bits(BitStream(42, "a"), 200) != first_bits(BitStream(42, "b"), 200));

  BitStream s(9);
  for (int i = 0; i < 1000; ++i) s.next_bit();
  CHECK(s.bits_consumed() == 1000);
}

TEST_CASE("next_bit is balanced") {
  BitStream s(1);
  int ones = 0;
  for (int i = 0; i < 100000; ++i) ones += s.next_bit();
  // 3 sigma for Binomial(1e5, 1/2) is about 474.
  CHECK(ones / 1e5 >= 0.49);
  CHECK(ones / 1e5 <= 0.51);
}

TEST_CASE("uniform_int edge cases and bit costs") {
  BitStream s(5);
  CHECK(s.uniform_int(1) == 1);
  CHECK(s.bits_consumed() == 0);

  for (int i = 0; i < 100; ++i) {
    const auto before = s.bits_consumed();
    const auto v = s.uniform_int(4);
    CHECK(v >= 1);
    CHECK(v <= 4);
    CHECK(s.bits_consumed() - before == 2);
  }
  CHECK_THROWS_AS(s.uniform_int(0), std::invalid_argument);
}

TEST_CASE("uniform_int(3): frequencies and mean bit cost") {
  BitStream s(17);
  const int draws = 100000;
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < draws; ++i) ++counts[s.uniform_int(3) - 1];
  // Each count is Binomial(1e5, 1/3): sd ~ 149.
  const double sd = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (auto c : counts) CHECK(std::abs(c - draws / 3.0) <= 3 * sd);
  // Dice roller for m = 3 rejects one of four 2-bit patterns: 8/3 bits on average.
  const double mean_bits = static_cast<double>(s.bits_consumed()) / draws;
  CHECK(mean_bits <= 3.7);
  CHECK(mean_bits == doctest::Approx(8.0 / 3.0).epsilon(0.02));
}

TEST_CASE("uniform_int(6) passes chi-square at 0.01") {
  BitStream s(2718);
  std::vector<std::uint64_t> counts(6, 0);
  for (int i = 0; i < 100000; ++i) ++counts[s.uniform_int(6) - 1];
  const std::vector<double> probs(6, 1.0 / 6);
  CHECK(stats::chi_square_gof(counts, probs).passes(0.01));
}

TEST_CASE("uniform_int expected bits stay within ceil(log2 m) + 2") {
  for (std::uint64_t m : {5ULL, 7ULL, 9ULL, 17ULL, 31ULL, 33ULL}) {
    BitStream s(m);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) s.uniform_int(m);
    const double mean_bits = static_cast<double>(s.bits_consumed()) / draws;
    CHECK(mean_bits <= std::ceil(std::log2(static_cast<double>(m))) + 2.0);
  }
}

TEST_CASE("bernoulli bit costs") {
  BitStream s(3);
  for (int i = 0; i < 50; ++i) CHECK(s.bernoulli(1.0) == 1);
  for (int i = 0; i < 50; ++i) CHECK(s.bernoulli(0.0) == 0);
  CHECK(s.bits_consumed() == 0);
  for (int i = 0; i < 50; ++i) {
    const auto before = s.bits_consumed();
    s.bernoulli(0.5);
    CHECK(s.bits_consumed() - before == 1);
  }
  CHECK_THROWS_AS(s.bernoulli(1.5), std::invalid_argument);
  CHECK_THROWS_AS(s.bernoulli(-0.1), std::invalid_argument);
}

TEST_CASE("bernoulli(0.3): mean and bit cost") {
  BitStream s(99);
  const int draws = 100000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) ones += s.bernoulli(0.3);
  const double sd = std::sqrt(0.3 * 0.7 / draws);
  CHECK(std::abs(ones / static_cast<double>(draws) - 0.3) <= 3 * sd);
  // The comparison stops at the first differing bit: Geometric(1/2), mean 2.
  CHECK(static_cast<double>(s.bits_consumed()) / draws <= 2.1);
}

TEST_CASE("uniform01 is tallied separately") {
  BitStream s(8);
  for (int i = 0; i < 10; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(s.bits_consumed() == 0);
  CHECK(s.continuous_bits() == 530);
}

TEST_CASE("fork") {
  BitStream a(11);
  BitStream b(11);
  auto a1 = a.fork("run/1");
  auto b1 = b.fork("run/1");
  CHECK(first_bits(a1, 128) == first_bits(b1, 128));

  auto a2 = a.fork("run/2");
  CHECK(first_bits(a1, 128) != first_bits(a2, 128));

  CHECK_THROWS_AS(a.fork("run/1"), std::invalid_argument);

  a1.next_bit();
  CHECK(a1.bits_consumed() == 1);
  CHECK(a.bits_consumed() == 0);
  // Forking does not disturb the parent's own sequence.
  BitStream fresh(11);
  CHECK(first_bits(a, 64) == first_bits(fresh, 64));
}

TEST_CASE("draw_step") {
  BitStream s(4);
  for (int k = 0; k < 100; ++k) {
    const auto before = s.bits_consumed();
    const auto d = draw_step(s, 2, 1.0);
    CHECK(d.i == 0);
    CHECK(d.c2 == 1);
    // Only c1 costs anything when n = 2 and pen = 1.
    CHECK(s.bits_consumed() - before == 1);
  }
  for (int k = 0; k < 1000; ++k) {
    const auto d = draw_step(s, 7, 0.4);
    CHECK(d.i >= 0);
    CHECK(d.i <= 5);
    CHECK(d.c1 <= 1);
    CHECK(d.c2 <= 1);
  }

  BitStream r1(123);
  BitStream r2(123);
  std::vector<StepDraw> recorded;
  for (int k = 0; k < 50; ++k) recorded.push_back(draw_step(r1, 9, 0.3));
  const Transcript transcript(recorded);
  REQUIRE(transcript.size() == 50);
  for (std::size_t k = 0; k < transcript.size(); ++k) CHECK(transcript[k] == draw_step(r2, 9, 0.3));
  CHECK(r1.bits_consumed() == r2.bits_consumed());
}
