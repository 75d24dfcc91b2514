#include "linext/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "linext/bit_stream.hpp"
#include "linext/weighted_chain.hpp"

namespace linext::exact {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

namespace {

class IdealCounter {
 public:
  explicit IdealCounter(const Poset& poset) : above_(poset.size(), 0) {
    const int n = poset.size();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (poset.related(a, b)) above_[a] |= 1U << b;
      }
    }
    memo_[0] = 1;
  }

  Count count(std::uint32_t ideal) {
    if (auto it = memo_.find(ideal); it != memo_.end()) return it->second;
    Count total = 0;
    for (std::uint32_t rest = ideal; rest != 0; rest &= rest - 1) {
      const int m = __builtin_ctz(rest);
      if ((above_[m] & ideal) == 0) total += count(ideal & ~(1U << m));
    }
    memo_.emplace(ideal, total);
    return total;
  }

 private:
  std::vector<std::uint32_t> above_;
  std::unordered_map<std::uint32_t, Count> memo_;
};

void extend(const Poset& poset, std::vector<int>& prefix, std::vector<int>& missing_preds,
            std::vector<char>& used, std::vector<Permutation>& out, std::size_t limit) {
  const int n = poset.size();
  if (static_cast<int>(prefix.size()) == n) {
    if (out.size() >= limit) {
      throw GuardError("more than " + std::to_string(limit) + " linear extensions");
    }
    out.push_back(prefix);
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (used[v] || missing_preds[v] != 0) continue;
    used[v] = 1;
    prefix.push_back(v);
    for (int w = 0; w < n; ++w) {
      if (poset.related(v, w)) --missing_preds[w];
    }
    extend(poset, prefix, missing_preds, used, out, limit);
    for (int w = 0; w < n; ++w) {
      if (poset.related(v, w)) ++missing_preds[w];
    }
    prefix.pop_back();
    used[v] = 0;
  }
}

}  // namespace

Count count_exact(const Poset& poset, int max_n) {
  const int n = poset.size();
  max_n = std::min(max_n, kDefaultCountCap);
  if (n > max_n) {
    throw GuardError("poset too large for exact count (n = " + std::to_string(n) +
                     ", cap " + std::to_string(max_n) + ")");
  }
  IdealCounter counter(poset);
  return counter.count((1U << n) - 1);
}

std::vector<Permutation> enumerate_extensions(const Poset& poset, std::size_t limit) {
  const int n = poset.size();
  std::vector<int> missing_preds(n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (poset.related(a, b)) ++missing_preds[b];
    }
  }
  std::vector<int> prefix;
  std::vector<char> used(n, 0);
  std::vector<Permutation> out;
  extend(poset, prefix, missing_preds, used, out, limit);
  return out;
}

double reference_weight(const Permutation& sigma, double beta) {
  const double cap = std::ceil(beta);
  const double pen = 1.0 + beta - cap;
  double w = 1.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double d = static_cast<double>(sigma[i]) - static_cast<double>(i);
    w *= pen * (d == cap ? 1.0 : 0.0) + (d < cap ? 1.0 : 0.0);
  }
  return w;
}

double partition_z(const Poset& poset, double beta, std::size_t limit) {
  if (!(beta >= 0.0 && beta <= poset.size())) {
    throw InputError("partition_z: beta outside [0, n]");
  }
  double z = 0.0;
  for (const auto& sigma : enumerate_extensions(poset, limit)) {
    z += reference_weight(sigma, beta);
  }
  return z;
}

KernelMatrix chain_kernel(const Poset& poset, double beta_value, std::size_t limit) {
  const int n = poset.size();
  const BetaParam beta(beta_value, n);
  if (!poset.is_canonical()) throw InputError("chain_kernel: poset must be canonical");
  KernelMatrix k;
  for (auto& sigma : enumerate_extensions(poset)) {
    if (reference_weight(sigma, beta_value) > 0.0) {
      if (k.support.size() >= limit) {
        throw GuardError("kernel support exceeds " + std::to_string(limit) + " states");
      }
      k.support.push_back(std::move(sigma));
    }
  }
  std::map<Permutation, std::size_t> index;
  for (std::size_t s = 0; s < k.support.size(); ++s) index.emplace(k.support[s], s);

  const std::size_t m = k.size();
  k.probs.assign(m * m, 0.0);
  if (n < 2) {
    for (std::size_t s = 0; s < m; ++s) k.probs[s * m + s] = 1.0;
    return k;
  }
  const double pen = beta.pen();
  for (std::size_t s = 0; s < m; ++s) {
    for (int i = 0; i + 1 < n; ++i) {
      for (std::uint8_t c1 = 0; c1 <= 1; ++c1) {
        for (std::uint8_t c2 = 0; c2 <= 1; ++c2) {
          const double p_c2 = c2 ? pen : 1.0 - pen;
          if (p_c2 == 0.0) continue;
          const double p = (1.0 / (n - 1)) * 0.5 * p_c2;
          Permutation next = k.support[s];
          chain_step(next, beta, StepDraw{i, c1, c2}, poset);
          k.probs[s * m + index.at(next)] += p;
        }
      }
    }
  }
  return k;
}

double stationarity_gap(const KernelMatrix& kernel, const Poset& /*poset*/, double beta) {
  const std::size_t m = kernel.size();
  std::vector<double> pi(m);
  double z = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    pi[s] = reference_weight(kernel.support[s], beta);
    z += pi[s];
  }
  for (auto& p : pi) p /= z;
  double gap = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    double flow = 0.0;
    for (std::size_t s = 0; s < m; ++s) flow += pi[s] * kernel.at(s, t);
    gap = std::max(gap, std::abs(flow - pi[t]));
  }
  return gap;
}

}  // namespace linext::exact
