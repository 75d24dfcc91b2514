#ifndef LINEXT_WEIGHTED_CHAIN_HPP
#define LINEXT_WEIGHTED_CHAIN_HPP

#include <span>

#include "linext/bit_stream.hpp"
#include "linext/poset.hpp"

namespace linext {

// The parameter beta in [0, n] with cap = ceil(beta) and
// pen = 1 + beta - cap in (0, 1].
class BetaParam {
 public:
  // Throws InputError unless 0 <= beta <= n.
  BetaParam(double beta, int n);

  double beta() const { return beta_; }
  int cap() const { return cap_; }
  double pen() const { return pen_; }

  // Weight factor for an element with displacement d = value - position:
  // 1 below cap, pen at cap, 0 above.
  double factor(int displacement) const {
    if (displacement < cap_) return 1.0;
    return displacement == cap_ ? pen_ : 0.0;
  }

 private:
  double beta_;
  int cap_;
  double pen_;
};

// Product over positions of factor(sigma(i) - i). Any permutation is
// accepted; those outside the support get weight 0.
double weight(std::span<const int> sigma, const BetaParam& beta);

// max_i (sigma(i) - i); 0 for the identity.
int max_displacement(std::span<const int> sigma);

inline bool in_support(std::span<const int> sigma, const BetaParam& beta) {
  return max_displacement(sigma) <= beta.cap();
}

struct StepOutcome {
  bool moved = false;
  int comparisons = 0;
};

// Gate on the element that would move left: b = sigma(i + 1) lands on
// position i with displacement e = b - i. Above cap the move is never
// allowed; at cap it needs c2.
inline bool left_move_allowed(int value, int position, const BetaParam& beta, int c2) {
  const int e = value - position;
  return e < beta.cap() || (e == beta.cap() && c2 == 1);
}

// One Metropolis step of the adjacent-transposition chain, in place.
// Swaps sigma(i), sigma(i + 1) iff c1 = 1, sigma(i) does not precede
// sigma(i + 1), and the left-move gate passes. Detailed balance holds for
// weight(., beta). Throws InputError if sigma is outside the support.
StepOutcome chain_step(std::span<int> sigma, const BetaParam& beta, const StepDraw& draw,
                       const Poset& poset);

namespace detail {
// Same as chain_step without the support check, for the samplers' hot loops.
inline StepOutcome chain_step_unchecked(std::span<int> sigma, const BetaParam& beta,
                                        const StepDraw& draw, const Poset& poset) {
  StepOutcome out;
  if (draw.c1 != 1) return out;
  const int i = draw.i;
  const int a = sigma[i];
  const int b = sigma[i + 1];
  out.comparisons = 1;
  if (poset.precedes(a, b)) return out;
  if (!left_move_allowed(b, i, beta, draw.c2)) return out;
  sigma[i] = b;
  sigma[i + 1] = a;
  out.moved = true;
  return out;
}
}  // namespace detail

}  // namespace linext

#endif
