#ifndef LINEXT_TPA_HPP
#define LINEXT_TPA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "linext/bit_stream.hpp"
#include "linext/bounding_cftp.hpp"
#include "linext/poset.hpp"

namespace linext {

// Totals of r Tootsie Pop runs. Each run starts at beta = shell and keeps
// drawing, shrinking beta to the smallest value whose set still holds the
// draw, until it lands in the center. k counts draws minus one per run, so
// k ~ Poisson(r ln(shell / center)).
struct TpaRunResult {
  std::uint64_t r = 0;
  std::uint64_t k = 0;
  std::vector<std::uint64_t> per_run_k;
  std::vector<std::vector<double>> beta_traces;  // n, then each contracted beta
  std::uint64_t samples_used = 0;                // always k + r
  CftpStats stats;

  double log_estimate() const { return r == 0 ? 0.0 : static_cast<double>(k) / r; }
  double estimate() const;

  // Merges another batch of runs; order does not change k / r.
  TpaRunResult& operator+=(const TpaRunResult& other);
};

struct TpaOptions {
  unsigned parallelism = 1;
  bool keep_traces = true;
  CftpOptions cftp;
};

// r runs over the family A(beta) with shell beta = n and center beta = 0 on a
// canonical poset. Run j draws from stream.fork("run/<j>") so results do not
// depend on how runs are split across threads.
TpaRunResult tpa_runs(const Poset& poset, std::uint64_t r, BitStream& stream,
                      const TpaOptions& options = {});

struct TwoPhaseEstimate {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t r1 = 0;
  std::uint64_t r2 = 0;
  double a_hat1 = 0.0;
  double l_hat2 = 0.0;
  TpaRunResult phase1;
  TpaRunResult phase2;
  std::uint64_t bits_discrete = 0;
  std::uint64_t bits_continuous = 0;
  std::uint64_t comparisons = 0;
  double wall_ms = 0.0;
};

// ceil(2 ln(2 / delta)).
std::uint64_t phase1_runs(double delta);

// ceil(2 (a + sqrt(a) + 2) (e'^2 - e'^3)^-1 ln(4 / delta)) with e' = ln(1 + eps).
std::uint64_t phase2_runs(double a_hat1, double epsilon, double delta);

// Phase 1 on stream.fork("phase1") sizes phase 2 on stream.fork("phase2");
// returns exp(k2 / r2). Requires 0 < epsilon <= 1 and 0 < delta < 1.
// runs_override, when set, replaces r2.
TwoPhaseEstimate two_phase(const Poset& poset, double epsilon, double delta, BitStream& stream,
                           const TpaOptions& options = {},
                           std::optional<std::uint64_t> runs_override = std::nullopt);

// TPA on the intervals [0, beta] inside [0, n] with center [0, 1]. Each draw
// is uniform on (0, beta], made as a discrete index X in {1..ceil(beta)}
// (the top index weighted by pen) plus a fractional part. k ~ Poisson(r ln n).
TpaRunResult interval_tpa(int n, std::uint64_t r, BitStream& stream);

struct ProductEstimate {
  double product = 1.0;  // estimates 1 / n
  double inverse = 1.0;  // estimates n
  std::vector<int> schedule;
};

// Halving schedule ceil(n / 2), ceil(. / 2), ..., 1. Each level's ratio is
// the fraction of uniform draws from {1..previous} that land in {1..current}.
ProductEstimate product_estimator(int n, std::uint64_t samples_per_level, BitStream& stream);

struct PoissonReport {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> dispersion_ratio;  // mean / variance, when variance > 0
  std::optional<double> z_score;           // against the reference, Poisson scale
  bool flagged = false;
};

// Moments of per-run tallies; with a reference A, z = (mean - A) / sqrt(A / runs)
// and the report is flagged when |z| exceeds z_threshold.
PoissonReport poisson_diagnostics(std::span<const std::uint64_t> per_run_ks,
                                  std::optional<double> reference = std::nullopt,
                                  double z_threshold = 4.0);

// Bound on expected discrete bits per perfect sample: 4.3 n^3 ln n (ceil(log2 n) + 3).
double sample_bits_bound(int n);
// Bound on comparisons per perfect sample: 8.6 n^3 ln n.
double sample_comparisons_bound(int n);

}  // namespace linext

#endif
