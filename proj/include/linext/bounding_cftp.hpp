#ifndef LINEXT_BOUNDING_CFTP_HPP
#define LINEXT_BOUNDING_CFTP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linext/bit_stream.hpp"
#include "linext/poset.hpp"
#include "linext/weighted_chain.hpp"

namespace linext {

inline constexpr int kTheta = -1;

// Rightmost-position bounds: entry b[j] = v means element v sits at a
// position <= j; kTheta means no constraint. The non-theta values are always
// {0, ..., present - 1}, introduced in home order.
struct BoundingState {
  std::vector<int> b;
  int present = 0;

  // (theta, ..., theta, 0): bounds every permutation.
  static BoundingState initial(int n);

  bool coalesced() const { return present == static_cast<int>(b.size()); }
};

// sigma lies in S(B): every bounded value sits at or left of its bound.
bool bounds(std::span<const int> sigma, const BoundingState& bound);

// Checks the structural invariants of a bounding state: the non-theta values
// are exactly {0, ..., present - 1}, and comparable values keep their bounds
// in order (c < v in the poset puts c's bound strictly left of v's).
// Returns a description of the first violation.
std::optional<std::string> check_bounding_invariants(const BoundingState& bound,
                                                     const Poset& poset);

struct BoundingOutcome {
  bool state_moved = false;
  bool bound_moved = false;
  // The coin the bound used: 1 - c1 when sigma(i) == B(i + 1), else c1.
  std::uint8_t bound_coin = 0;
  int comparisons = 0;
};

// Coupled update of (sigma, B). sigma moves exactly as chain_step does; B
// moves by the same rule with the bound coin, treating theta as incomparable
// and exempt from the displacement gate; a theta left in the last slot is
// replaced by the next home value. Keeps sigma inside S(B).
BoundingOutcome bounding_chain_step(std::span<int> sigma, BoundingState& bound,
                                    const BetaParam& beta, const StepDraw& draw,
                                    const Poset& poset);

// One level of the coupling: the draws plus, per step, the bound value that
// sat right of the pair and the bound coin. The bound trajectory is a
// function of (i, bound coin, c2) alone, so replaying a different state
// against it must recover c1 = bound_coin xor [sigma(i) == bound_right].
class LevelTranscript {
 public:
  struct Step {
    StepDraw draw;
    int bound_right = kTheta;
    std::uint8_t bound_coin = 0;
  };

  void push(const Step& step) { steps_.push_back(step); }
  std::span<const Step> steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }

  // The raw (i, c1, c2) draws of this level.
  Transcript draws() const;

 private:
  std::vector<Step> steps_;
};

// Runs the recorded level forward from sigma, updating only the state, with
// each step's c1 recomputed against the recorded bound trajectory. Returns
// the number of comparisons made.
std::uint64_t replay_level(std::span<int> sigma, const LevelTranscript& level,
                           const BetaParam& beta, const Poset& poset);

struct CftpStats {
  std::uint64_t total_steps = 0;
  std::uint64_t levels = 0;
  std::uint64_t bits_discrete = 0;
  std::uint64_t bits_continuous = 0;
  std::uint64_t comparisons = 0;

  CftpStats& operator+=(const CftpStats& other);
};

struct CftpOptions {
  // Number of doublings allowed before giving up with a GuardError.
  int max_levels = 40;
};

struct Sample {
  Permutation sigma;
  CftpStats stats;
};

// Non-Markovian coupling from the past starting with t steps and doubling.
// Each level runs the coupled update from (identity, initial bound); the
// first level whose bound coalesces yields its bound, and the earlier levels
// are then replayed on top of it from the deepest to the most recent.
// Returns an exact draw from weight(., beta) / Z(beta).
Sample generate(const BetaParam& beta, std::uint64_t t, BitStream& stream, const Poset& poset,
                const CftpOptions& options = {});

// generate() with t0 = 2 n^2.
Sample perfect_sample(const BetaParam& beta, BitStream& stream, const Poset& poset,
                      const CftpOptions& options = {});

}  // namespace linext

#endif
