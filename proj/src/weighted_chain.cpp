#include "linext/weighted_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linext {

BetaParam::BetaParam(double beta, int n) : beta_(beta) {
  if (!(beta >= 0.0 && beta <= static_cast<double>(n))) {
    throw InputError("beta must lie in [0, " + std::to_string(n) + "]");
  }
  cap_ = static_cast<int>(std::ceil(beta));
  pen_ = 1.0 + beta - cap_;
}

double weight(std::span<const int> sigma, const BetaParam& beta) {
  double w = 1.0;
  for (std::size_t i = 0; i < sigma.size() && w != 0.0; ++i) {
    w *= beta.factor(sigma[i] - static_cast<int>(i));
  }
  return w;
}

int max_displacement(std::span<const int> sigma) {
  int d = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    d = std::max(d, sigma[i] - static_cast<int>(i));
  }
  return d;
}

StepOutcome chain_step(std::span<int> sigma, const BetaParam& beta, const StepDraw& draw,
                       const Poset& poset) {
  if (static_cast<int>(sigma.size()) != poset.size() || draw.i < 0 ||
      draw.i + 1 >= static_cast<int>(sigma.size())) {
    throw InputError("chain_step: draw or state does not match the poset");
  }
  if (!in_support(sigma, beta)) {
    throw InputError("chain_step: state has zero weight at this beta");
  }
  return detail::chain_step_unchecked(sigma, beta, draw, poset);
}

}  // namespace linext
