#include "linext/continuous_embed.hpp"

#include <cmath>
#include <limits>

namespace linext {

ContinuousPoint lift(std::span<const int> sigma, const BetaParam& beta, BitStream& stream) {
  if (!in_support(sigma, beta)) {
    throw InputError("lift: extension has zero weight at this beta");
  }
  ContinuousPoint point;
  point.x.resize(sigma.size());
  for (std::size_t p = 0; p < sigma.size(); ++p) {
    const int v = sigma[p];
    const double width = (v - static_cast<int>(p) == beta.cap()) ? beta.pen() : 1.0;
    // 1 - U is uniform on (0, 1], giving the left-open interval.
    point.x[p] = v + width * (1.0 - stream.uniform01());
  }
  return point;
}

double distance(const ContinuousPoint& point) {
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < point.x.size(); ++p) {
    d = std::max(d, point.x[p] - static_cast<double>(p + 1));
  }
  return d;
}

Permutation ceil_perm(const ContinuousPoint& point) {
  const int n = static_cast<int>(point.x.size());
  Permutation sigma(n);
  std::vector<char> seen(n, 0);
  for (int p = 0; p < n; ++p) {
    const double xv = point.x[p];
    if (!(xv > 0.0 && xv <= n)) throw InputError("ceil_perm: coordinate outside (0, n]");
    const int v = static_cast<int>(std::ceil(xv)) - 1;
    if (seen[v]) throw InputError("ceil_perm: ceilings do not form a permutation");
    seen[v] = 1;
    sigma[p] = v;
  }
  return sigma;
}

}  // namespace linext
