#include <doctest.h>

#include <random>

#include "linext/exact.hpp"
#include "linext/weighted_chain.hpp"

using namespace linext;

TEST_CASE("BetaParam") {
  const BetaParam b(1.3, 4);
  CHECK(b.cap() == 2);
  CHECK(b.pen() == doctest::Approx(0.3));
  const BetaParam whole(2.0, 4);
  CHECK(whole.cap() == 2);
  CHECK(whole.pen() == 1.0);
  const BetaParam zero(0.0, 4);
  CHECK(zero.cap() == 0);
  CHECK(zero.pen() == 1.0);
  CHECK_THROWS_AS(BetaParam(4.5, 4), InputError);
  CHECK_THROWS_AS(BetaParam(-0.1, 4), InputError);
}

TEST_CASE("weight of displaced permutations") {
  const BetaParam b(1.3, 4);
  CHECK(weight(std::vector<int>{2, 1, 3, 0}, b) == doctest::Approx(0.3));
  CHECK(weight(std::vector<int>{2, 3, 0, 1}, b) == doctest::Approx(0.09));
  // Displacement 3 > cap.
  CHECK(weight(std::vector<int>{3, 0, 1, 2}, b) == 0.0);
  const BetaParam full(4.0, 4);
  CHECK(weight(std::vector<int>{3, 2, 1, 0}, full) == 1.0);
}

TEST_CASE("max_displacement") {
  CHECK(max_displacement(identity_permutation(5)) == 0);
  CHECK(max_displacement(std::vector<int>{2, 1, 3, 0}) == 2);
  CHECK(max_displacement(std::vector<int>{1, 0}) == 1);
}

TEST_CASE("chain_step gate on the left-moving element") {
  const auto anti = families::antichain(2);
  const BetaParam b(0.5, 2);
  {
    std::vector<int> s{0, 1};
    CHECK_FALSE(chain_step(s, b, StepDraw{0, 1, 0}, anti).moved);
    CHECK(s == std::vector<int>{0, 1});
  }
  {
    std::vector<int> s{0, 1};
    CHECK(chain_step(s, b, StepDraw{0, 1, 1}, anti).moved);
    CHECK(s == std::vector<int>{1, 0});
  }
  {
    // Moving back right lowers the displacement: no c2 needed.
    std::vector<int> s{1, 0};
    CHECK(chain_step(s, b, StepDraw{0, 1, 0}, anti).moved);
  }
  {
    const auto ch = families::chain(2);
    std::vector<int> s{0, 1};
    const auto out = chain_step(s, b, StepDraw{0, 1, 1}, ch);
    CHECK_FALSE(out.moved);
    CHECK(out.comparisons == 1);
  }
  {
    std::vector<int> s{0, 1};
    const auto out = chain_step(s, b, StepDraw{0, 0, 1}, anti);
    CHECK_FALSE(out.moved);
    CHECK(out.comparisons == 0);
  }
  {
    // Displacement would exceed cap: never moves.
    const BetaParam b2(1.0, 3);
    std::vector<int> s{0, 2, 1};
    CHECK_FALSE(chain_step(s, b2, StepDraw{0, 1, 1}, families::antichain(3)).moved);
    CHECK(s == std::vector<int>{0, 2, 1});
  }
}

TEST_CASE("chain_step rejects states outside the support") {
  std::vector<int> s{2, 0, 1};
  CHECK_THROWS_AS(chain_step(s, BetaParam(1.0, 3), StepDraw{0, 1, 1}, families::antichain(3)),
                  InputError);
}

TEST_CASE("support closure and comparison budget along random trajectories") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    RawRelations raw{n, {}};
    for (int a = 1; a <= n; ++a) {
      for (int c = a + 1; c <= n; ++c) {
        if (rng() % 5 == 0) raw.pairs.emplace_back(a, c);
      }
    }
    const auto p = close_transitively(raw);
    const BetaParam beta(std::uniform_real_distribution<double>(0.0, n)(rng), n);
    BitStream s(rng());
    auto sigma = identity_permutation(n);
    for (int step = 0; step < 2000; ++step) {
      const auto before = p.query_count();
      const auto out = chain_step(sigma, beta, draw_step(s, n, beta.pen()), p);
      CHECK(p.query_count() - before == static_cast<std::uint64_t>(out.comparisons));
      CHECK(out.comparisons <= 1);
      REQUIRE(weight(sigma, beta) > 0.0);
      REQUIRE(is_linear_extension(p, sigma));
    }
  }
}

TEST_CASE("beta = n: the gate never blocks") {
  const int n = 5;
  const auto anti = families::antichain(n);
  const BetaParam beta(n, n);
  BitStream s(21);
  auto sigma = identity_permutation(n);
  for (int step = 0; step < 5000; ++step) {
    auto d = draw_step(s, n, beta.pen());
    d.c1 = 1;
    d.c2 = 0;
    CHECK(chain_step(sigma, beta, d, anti).moved);
  }
}

TEST_CASE("detailed balance across the beta grid") {
  const std::vector<Poset> posets{families::antichain(3), families::antichain(5),
                                  families::grid(2, 2), families::from_pairs(4, {{1, 3}, {2, 4}}),
                                  families::from_pairs(5, {{1, 4}, {2, 4}, {3, 5}})};
  for (const auto& p : posets) {
    for (double beta : {0.25, 0.5, 1.0, 1.3, 2.0, static_cast<double>(p.size())}) {
      const auto k = exact::chain_kernel(p, beta);
      // Pairwise flows, stronger than stationarity.
      for (std::size_t s = 0; s < k.size(); ++s) {
        for (std::size_t t = 0; t < k.size(); ++t) {
          const double ws = exact::reference_weight(k.support[s], beta);
          const double wt = exact::reference_weight(k.support[t], beta);
          CHECK(std::abs(ws * k.at(s, t) - wt * k.at(t, s)) <= 1e-12);
        }
      }
    }
  }
}
