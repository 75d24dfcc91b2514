#ifndef LINEXT_STATISTICS_HPP
#define LINEXT_STATISTICS_HPP

#include <cstdint>
#include <span>

namespace linext::stats {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;  // after pooling

  bool passes(double significance) const { return p_value >= significance; }
};

// Pearson goodness-of-fit of observed counts against probabilities (which
// need not be normalized). Cells with expected count below min_expected are
// pooled into one cell, which is itself merged into the smallest remaining
// cell if still too small.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected = 5.0);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
};

Moments moments(std::span<const double> values);

}  // namespace linext::stats

#endif
