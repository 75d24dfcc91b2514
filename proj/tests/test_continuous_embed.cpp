#include <doctest.h>

#include <cmath>
#include <random>

#include "linext/continuous_embed.hpp"
#include "linext/exact.hpp"

using namespace linext;

TEST_CASE("lift intervals") {
  BitStream s(3);
  const BetaParam b(0.5, 2);
  for (int k = 0; k < 1000; ++k) {
    // sigma = (2, 1): position 1 sits at displacement 1 = cap.
    const auto x = lift(std::vector<int>{1, 0}, b, s);
    CHECK(x.x[0] > 1.0);
    CHECK(x.x[0] <= 1.5);
    CHECK(x.x[1] > 0.0);
    CHECK(x.x[1] <= 1.0);
  }
  CHECK(s.continuous_bits() == 2 * 1000 * 53);
  CHECK(s.bits_consumed() == 0);

  const BetaParam full(4.0, 4);
  const std::vector<int> sigma{3, 1, 0, 2};
  for (int k = 0; k < 200; ++k) {
    const auto x = lift(sigma, full, s);
    for (int p = 0; p < 4; ++p) {
      CHECK(x.x[p] > sigma[p]);
      CHECK(x.x[p] <= sigma[p] + 1);
    }
  }

  CHECK_THROWS_AS(lift(std::vector<int>{2, 0, 1}, BetaParam(1.0, 3), s), InputError);
}

TEST_CASE("distance") {
  CHECK(distance(ContinuousPoint{{0.7, 1.2}}) == doctest::Approx(-0.3));
  CHECK(distance(ContinuousPoint{{1.0, 2.0, 3.0}}) == 0.0);
}

TEST_CASE("ceil_perm") {
  CHECK(ceil_perm(ContinuousPoint{{0.2, 1.7, 2.01}}) == Permutation{0, 1, 2});
  CHECK(ceil_perm(ContinuousPoint{{2.0, 0.5}}) == Permutation{1, 0});
  CHECK_THROWS_AS(ceil_perm(ContinuousPoint{{0.5, 0.6}}), InputError);
  CHECK_THROWS_AS(ceil_perm(ContinuousPoint{{0.0, 1.5}}), InputError);
  CHECK_THROWS_AS(ceil_perm(ContinuousPoint{{2.5, 1.0}}), InputError);
}

TEST_CASE("lifted points keep their permutation and stay within beta") {
  std::mt19937_64 rng(44);
  const auto p = families::from_pairs(5, {{1, 3}, {2, 4}, {2, 5}});
  const auto all = exact::enumerate_extensions(p);
  BitStream s(45);
  for (int k = 0; k < 2000; ++k) {
    const BetaParam beta(std::uniform_real_distribution<double>(0.0, 5.0)(rng), 5);
    const auto& sigma = all[rng() % all.size()];
    if (!in_support(sigma, beta)) continue;
    const auto x = lift(sigma, beta, s);
    CHECK(ceil_perm(x) == sigma);
    CHECK(distance(x) <= beta.beta() + 1e-12);
    // The infimum of beta' containing x is the distance itself.
    const double d = std::max(0.0, distance(x));
    CHECK(in_support(sigma, BetaParam(d, 5)));
  }
}

TEST_CASE("measure of A(beta) matches Z(beta)") {
  // Uniform points of (0, n]^n; a point is in A(beta) when its ceilings form
  // an extension and its distance is at most beta. The hit rate times n^n
  // estimates Z(beta).
  const auto p = families::from_pairs(3, {{1, 3}});
  const int n = 3;
  const double volume = 27.0;
  BitStream s(2);
  const int draws = 200000;
  for (double beta : {0.0, 0.4, 1.0, 1.7, 3.0}) {
    int hits = 0;
    for (int k = 0; k < draws; ++k) {
      ContinuousPoint x{{0, 0, 0}};
      for (auto& v : x.x) v = n * (1.0 - s.uniform01());
      Permutation sigma;
      try {
        sigma = ceil_perm(x);
      } catch (const InputError&) {
        continue;
      }
      if (is_linear_extension(p, sigma) && distance(x) <= beta) ++hits;
    }
    const double z = exact::partition_z(p, beta);
    const double q = z / volume;
    const double sd = std::sqrt(q * (1.0 - q) / draws);
    CAPTURE(beta);
    CHECK(std::abs(hits / static_cast<double>(draws) - q) <= 3.0 * sd);
  }
}

TEST_CASE("nesting: acceptance is monotone in beta") {
  BitStream s(6);
  const int n = 4;
  for (int k = 0; k < 5000; ++k) {
    ContinuousPoint x{std::vector<double>(n)};
    for (auto& v : x.x) v = n * (1.0 - s.uniform01());
    const double d = distance(x);
    for (double lo = 0.0; lo <= n; lo += 0.5) {
      for (double hi = lo; hi <= n; hi += 0.5) {
        if (d <= lo) CHECK(d <= hi);
      }
    }
  }
}
