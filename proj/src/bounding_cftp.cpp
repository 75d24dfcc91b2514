#include "linext/bounding_cftp.hpp"

#include <algorithm>

namespace linext {

BoundingState BoundingState::initial(int n) {
  BoundingState s;
  s.b.assign(n, kTheta);
  s.b[n - 1] = 0;
  s.present = 1;
  return s;
}

bool bounds(std::span<const int> sigma, const BoundingState& bound) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> position(n);
  for (int p = 0; p < n; ++p) position[sigma[p]] = p;
  for (int j = 0; j < n; ++j) {
    const int v = bound.b[j];
    if (v != kTheta && position[v] > j) return false;
  }
  return true;
}

std::optional<std::string> check_bounding_invariants(const BoundingState& bound,
                                                     const Poset& poset) {
  const int n = static_cast<int>(bound.b.size());
  std::vector<int> where(n, -1);
  int count = 0;
  for (int j = 0; j < n; ++j) {
    const int v = bound.b[j];
    if (v == kTheta) continue;
    if (v < 0 || v >= n) return "bound value out of range at slot " + std::to_string(j);
    if (where[v] != -1) return "bound value " + std::to_string(v) + " repeated";
    where[v] = j;
    ++count;
  }
  if (count != bound.present) return "present count out of sync";
  for (int v = 0; v < count; ++v) {
    if (where[v] == -1) return "bound values are not a prefix of the home order";
  }
  for (int c = 0; c < count; ++c) {
    for (int v = 0; v < count; ++v) {
      if (poset.related(c, v) && where[c] >= where[v]) {
        return "bound of " + std::to_string(c) + " not left of bound of " + std::to_string(v);
      }
    }
  }
  return std::nullopt;
}

namespace {

BoundingOutcome coupled_step(std::span<int> sigma, BoundingState& bound, const BetaParam& beta,
                             const StepDraw& draw, const Poset& poset) {
  BoundingOutcome out;
  const int i = draw.i;
  auto& b = bound.b;
  out.bound_coin = static_cast<std::uint8_t>(sigma[i] == b[i + 1] ? 1 - draw.c1 : draw.c1);

  const auto state = detail::chain_step_unchecked(sigma, beta, draw, poset);
  out.state_moved = state.moved;
  out.comparisons = state.comparisons;

  if (out.bound_coin == 1) {
    const int left = b[i];
    const int right = b[i + 1];
    bool allowed = true;
    if (left != kTheta && right != kTheta) {
      ++out.comparisons;
      allowed = !poset.precedes(left, right);
    }
    if (allowed && right != kTheta) allowed = left_move_allowed(right, i, beta, draw.c2);
    if (allowed) {
      std::swap(b[i], b[i + 1]);
      out.bound_moved = true;
    }
  }

  const auto last = b.size() - 1;
  if (b[last] == kTheta) {
    b[last] = bound.present;
    ++bound.present;
  }
  return out;
}

}  // namespace

BoundingOutcome bounding_chain_step(std::span<int> sigma, BoundingState& bound,
                                    const BetaParam& beta, const StepDraw& draw,
                                    const Poset& poset) {
  const int n = poset.size();
  if (static_cast<int>(sigma.size()) != n || static_cast<int>(bound.b.size()) != n ||
      draw.i < 0 || draw.i + 1 >= n) {
    throw InputError("bounding_chain_step: draw or state does not match the poset");
  }
  if (!in_support(sigma, beta)) {
    throw InputError("bounding_chain_step: state has zero weight at this beta");
  }
  if (!bounds(sigma, bound)) {
    throw InputError("bounding_chain_step: state is not inside the bounding set");
  }
  return coupled_step(sigma, bound, beta, draw, poset);
}

Transcript LevelTranscript::draws() const {
  std::vector<StepDraw> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back(s.draw);
  return Transcript(std::move(out));
}

std::uint64_t replay_level(std::span<int> sigma, const LevelTranscript& level,
                           const BetaParam& beta, const Poset& poset) {
  std::uint64_t comparisons = 0;
  for (const auto& step : level.steps()) {
    StepDraw d = step.draw;
    d.c1 = static_cast<std::uint8_t>(sigma[d.i] == step.bound_right ? 1 - step.bound_coin
                                                                    : step.bound_coin);
    comparisons += static_cast<std::uint64_t>(
        detail::chain_step_unchecked(sigma, beta, d, poset).comparisons);
  }
  return comparisons;
}

CftpStats& CftpStats::operator+=(const CftpStats& other) {
  total_steps += other.total_steps;
  levels += other.levels;
  bits_discrete += other.bits_discrete;
  bits_continuous += other.bits_continuous;
  comparisons += other.comparisons;
  return *this;
}

Sample generate(const BetaParam& beta, std::uint64_t t, BitStream& stream, const Poset& poset,
                const CftpOptions& options) {
  if (t < 1) throw InputError("generate: t must be at least 1");
  const int n = poset.size();
  Sample out;
  const auto bits_before = stream.bits_consumed();
  const auto cont_before = stream.continuous_bits();
  if (n == 1) {
    out.sigma = {0};
    return out;
  }

  // Level k covers the 2^k t steps further into the past than level k - 1;
  // levels are drawn in the same order the recursive formulation draws them.
  std::vector<LevelTranscript> levels;
  Permutation sigma;
  std::uint64_t length = t;
  while (true) {
    if (static_cast<int>(levels.size()) >= options.max_levels) {
      throw GuardError("CFTP did not coalesce within " + std::to_string(options.max_levels) +
                       " doublings");
    }
    sigma = identity_permutation(n);
    auto bound = BoundingState::initial(n);
    LevelTranscript level;
    for (std::uint64_t j = 0; j < length; ++j) {
      const auto draw = draw_step(stream, n, beta.pen());
      LevelTranscript::Step rec{draw, bound.b[draw.i + 1], 0};
      const auto o = coupled_step(sigma, bound, beta, draw, poset);
      rec.bound_coin = o.bound_coin;
      out.stats.comparisons += static_cast<std::uint64_t>(o.comparisons);
      level.push(rec);
    }
    out.stats.total_steps += length;
    levels.push_back(std::move(level));
    if (bound.coalesced()) {
      sigma = bound.b;
      break;
    }
    length *= 2;
  }
  out.stats.levels = levels.size();

  // Replay the non-coalesced levels, most distant first.
  for (auto it = levels.rbegin() + 1; it != levels.rend(); ++it) {
    out.stats.comparisons += replay_level(sigma, *it, beta, poset);
    out.stats.total_steps += it->size();
  }
  out.sigma = std::move(sigma);
  out.stats.bits_discrete = stream.bits_consumed() - bits_before;
  out.stats.bits_continuous = stream.continuous_bits() - cont_before;
  return out;
}

Sample perfect_sample(const BetaParam& beta, BitStream& stream, const Poset& poset,
                      const CftpOptions& options) {
  const auto n = static_cast<std::uint64_t>(poset.size());
  return generate(beta, 2 * n * n, stream, poset, options);
}

}  // namespace linext
