#include "linext/statistics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace linext::stats {

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities, double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_gof: size mismatch");
  }
  const double total = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  const double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);

  std::vector<double> exp_cells;
  std::vector<double> obs_cells;
  double pooled_exp = 0.0;
  double pooled_obs = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = total * probabilities[c] / mass;
    const auto o = static_cast<double>(observed[c]);
    if (e < min_expected) {
      pooled_exp += e;
      pooled_obs += o;
    } else {
      exp_cells.push_back(e);
      obs_cells.push_back(o);
    }
  }
  if (pooled_exp > 0.0 || pooled_obs > 0.0) {
    if (pooled_exp >= min_expected || exp_cells.empty()) {
      exp_cells.push_back(pooled_exp);
      obs_cells.push_back(pooled_obs);
    } else {
      const auto smallest = std::min_element(exp_cells.begin(), exp_cells.end()) - exp_cells.begin();
      exp_cells[smallest] += pooled_exp;
      obs_cells[smallest] += pooled_obs;
    }
  }

  ChiSquareResult r;
  r.bins = static_cast<int>(exp_cells.size());
  r.dof = r.bins - 1;
  for (std::size_t c = 0; c < exp_cells.size(); ++c) {
    const double d = obs_cells[c] - exp_cells[c];
    r.statistic += exp_cells[c] > 0.0 ? d * d / exp_cells[c] : (obs_cells[c] > 0 ? 1e300 : 0.0);
  }
  if (r.dof < 1) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

Moments moments(std::span<const double> values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.variance = ss / (values.size() - 1);
  }
  return m;
}

}  // namespace linext::stats
