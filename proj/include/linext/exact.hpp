#ifndef LINEXT_EXACT_HPP
#define LINEXT_EXACT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "linext/poset.hpp"

namespace linext::exact {

using Count = unsigned __int128;

std::string to_string(Count value);

inline constexpr int kDefaultCountCap = 24;
inline constexpr std::size_t kDefaultEnumerationLimit = 1'000'000;
inline constexpr std::size_t kDefaultKernelLimit = 10'000;

// L(P) by dynamic programming over order ideals:
// L(D) = sum over maximal m of D of L(D \ {m}), memoized on n-bit sets.
// Throws GuardError when n exceeds max_n (at most 24).
Count count_exact(const Poset& poset, int max_n = kDefaultCountCap);

// All linear extensions in lexicographic order (0-based ids). Throws
// GuardError once more than `limit` extensions are found.
std::vector<Permutation> enumerate_extensions(const Poset& poset,
                                              std::size_t limit = kDefaultEnumerationLimit);

// Displacement weight evaluated independently of the sampler code, straight from
// the indicator form: prod_i (pen [d_i = cap] + [d_i < cap]).
double reference_weight(const Permutation& sigma, double beta);

// Z(beta) by enumeration. beta must lie in [0, n].
double partition_z(const Poset& poset, double beta,
                   std::size_t limit = kDefaultEnumerationLimit);

struct KernelMatrix {
  std::vector<Permutation> support;
  std::vector<double> probs;  // row-major, support.size() squared

  std::size_t size() const { return support.size(); }
  double at(std::size_t from, std::size_t to) const { return probs[from * size() + to]; }
};

// Exact transition matrix of chain_step on the positive-weight extensions,
// built by pushing every (i, c1, c2) outcome through chain_step with its
// probability (1/(n-1)) (1/2) {pen or 1 - pen}.
KernelMatrix chain_kernel(const Poset& poset, double beta,
                          std::size_t limit = kDefaultKernelLimit);

// max |(pi K)(s) - pi(s)| with pi proportional to reference_weight.
double stationarity_gap(const KernelMatrix& kernel, const Poset& poset, double beta);

}  // namespace linext::exact

#endif
