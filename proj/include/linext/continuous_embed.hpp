#ifndef LINEXT_CONTINUOUS_EMBED_HPP
#define LINEXT_CONTINUOUS_EMBED_HPP

#include <span>
#include <vector>

#include "linext/bit_stream.hpp"
#include "linext/poset.hpp"
#include "linext/weighted_chain.hpp"

namespace linext {

// A point of (0, n]^n whose coordinate ceilings form a permutation. Entries
// are in the 1-based real coordinates: coordinate p (0-based position) of a
// point induced by element v lies in (v, v + 1].
struct ContinuousPoint {
  std::vector<double> x;
};

// Lifts an extension to a uniform point of A(beta) conditional on its
// ceilings: each coordinate is uniform on (v, v + 1], except at displacement
// cap where it is uniform on (v, v + pen]. Throws InputError outside the
// support.
ContinuousPoint lift(std::span<const int> sigma, const BetaParam& beta, BitStream& stream);

// max over positions of x(p) - p in 1-based terms; lies in (-1, n - 1].
// No ceiling is applied, so {x : distance(x) <= beta} has measure Z(beta).
double distance(const ContinuousPoint& point);

// Coordinatewise ceiling as a 0-based permutation. Throws InputError if a
// coordinate is outside (0, n] or two coordinates share a ceiling.
Permutation ceil_perm(const ContinuousPoint& point);

}  // namespace linext

#endif
