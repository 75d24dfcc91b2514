#include "linext/tpa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "linext/continuous_embed.hpp"
#include "linext/statistics.hpp"

namespace linext {

double TpaRunResult::estimate() const { return std::exp(log_estimate()); }

TpaRunResult& TpaRunResult::operator+=(const TpaRunResult& other) {
  r += other.r;
  k += other.k;
  per_run_k.insert(per_run_k.end(), other.per_run_k.begin(), other.per_run_k.end());
  beta_traces.insert(beta_traces.end(), other.beta_traces.begin(), other.beta_traces.end());
  samples_used += other.samples_used;
  stats += other.stats;
  return *this;
}

namespace {

struct RunOutcome {
  std::uint64_t k = 0;
  std::vector<double> trace;
  CftpStats stats;
};

RunOutcome one_run(const Poset& poset, BitStream& stream, const TpaOptions& options) {
  const int n = poset.size();
  RunOutcome out;
  double beta = n;
  out.trace.push_back(beta);
  std::uint64_t draws = 0;
  do {
    ++draws;
    const BetaParam param(beta, n);
    auto sample = perfect_sample(param, stream, poset, options.cftp);
    out.stats += sample.stats;
    const auto cont_before = stream.continuous_bits();
    const auto point = lift(sample.sigma, param, stream);
    out.stats.bits_continuous += stream.continuous_bits() - cont_before;
    beta = std::min(distance(point), beta);
    out.trace.push_back(beta);
  } while (beta > 0.0);
  out.k = draws - 1;
  return out;
}

}  // namespace

TpaRunResult tpa_runs(const Poset& poset, std::uint64_t r, BitStream& stream,
                      const TpaOptions& options) {
  if (r < 1) throw InputError("tpa_runs: r must be at least 1");
  std::vector<BitStream> streams;
  streams.reserve(r);
  for (std::uint64_t j = 0; j < r; ++j) streams.push_back(stream.fork("run/" + std::to_string(j)));

  std::vector<RunOutcome> outcomes(r);
  const auto workers = static_cast<std::uint64_t>(std::max(1U, options.parallelism));
  if (workers == 1 || r == 1) {
    for (std::uint64_t j = 0; j < r; ++j) outcomes[j] = one_run(poset, streams[j], options);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::uint64_t chunk = (r + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t j = w * chunk; j < std::min(r, (w + 1) * chunk); ++j) {
            outcomes[j] = one_run(poset, streams[j], options);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  TpaRunResult result;
  result.r = r;
  result.per_run_k.reserve(r);
  for (auto& o : outcomes) {
    result.k += o.k;
    result.per_run_k.push_back(o.k);
    result.stats += o.stats;
    if (options.keep_traces) result.beta_traces.push_back(std::move(o.trace));
  }
  result.samples_used = result.k + result.r;
  return result;
}

std::uint64_t phase1_runs(double delta) {
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(2.0 * std::log(2.0 / delta))));
}

std::uint64_t phase2_runs(double a_hat1, double epsilon, double delta) {
  const double ep = std::log1p(epsilon);
  const double runs = 2.0 * (a_hat1 + std::sqrt(a_hat1) + 2.0) / (ep * ep - ep * ep * ep) *
                      std::log(4.0 / delta);
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(runs)));
}

TwoPhaseEstimate two_phase(const Poset& poset, double epsilon, double delta, BitStream& stream,
                           const TpaOptions& options,
                           std::optional<std::uint64_t> runs_override) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (runs_override && *runs_override < 1) throw InputError("runs override must be positive");
  const auto start = std::chrono::steady_clock::now();

  TwoPhaseEstimate est;
  est.epsilon = epsilon;
  est.delta = delta;
  est.r1 = phase1_runs(delta);
  auto s1 = stream.fork("phase1");
  est.phase1 = tpa_runs(poset, est.r1, s1, options);
  est.a_hat1 = est.phase1.log_estimate();

  est.r2 = runs_override ? *runs_override : phase2_runs(est.a_hat1, epsilon, delta);
  auto s2 = stream.fork("phase2");
  est.phase2 = tpa_runs(poset, est.r2, s2, options);
  est.l_hat2 = est.phase2.estimate();

  const auto total = [&] {
    CftpStats s = est.phase1.stats;
    s += est.phase2.stats;
    return s;
  }();
  est.bits_discrete = total.bits_discrete;
  est.bits_continuous = total.bits_continuous;
  est.comparisons = total.comparisons;
  est.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return est;
}

TpaRunResult interval_tpa(int n, std::uint64_t r, BitStream& stream) {
  if (n < 1) throw InputError("interval_tpa: n must be at least 1");
  if (r < 1) throw InputError("interval_tpa: r must be at least 1");
  TpaRunResult result;
  result.r = r;
  const auto bits_before = stream.bits_consumed();
  const auto cont_before = stream.continuous_bits();
  for (std::uint64_t run = 0; run < r; ++run) {
    double beta = n;
    std::vector<double> trace{beta};
    std::uint64_t draws = 0;
    do {
      ++draws;
      const auto cap = static_cast<std::uint64_t>(std::ceil(beta));
      const double pen = 1.0 + beta - static_cast<double>(cap);
      std::uint64_t x = 0;
      do {
        x = stream.uniform_int(cap);
      } while (x == cap && stream.bernoulli(pen) == 0);
      const double width = x < cap ? 1.0 : pen;
      beta = static_cast<double>(x - 1) + width * (1.0 - stream.uniform01());
      trace.push_back(beta);
    } while (beta > 1.0);
    result.per_run_k.push_back(draws - 1);
    result.k += draws - 1;
    result.beta_traces.push_back(std::move(trace));
  }
  result.samples_used = result.k + result.r;
  result.stats.bits_discrete = stream.bits_consumed() - bits_before;
  result.stats.bits_continuous = stream.continuous_bits() - cont_before;
  return result;
}

ProductEstimate product_estimator(int n, std::uint64_t samples_per_level, BitStream& stream) {
  if (n < 1) throw InputError("product_estimator: n must be at least 1");
  if (samples_per_level < 1) throw InputError("product_estimator: need at least one sample");
  ProductEstimate est;
  int previous = n;
  while (previous > 1) {
    const int current = (previous + 1) / 2;
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples_per_level; ++s) {
      if (stream.uniform_int(static_cast<std::uint64_t>(previous)) <=
          static_cast<std::uint64_t>(current)) {
        ++hits;
      }
    }
    est.product *= static_cast<double>(hits) / static_cast<double>(samples_per_level);
    est.schedule.push_back(current);
    previous = current;
  }
  est.inverse = 1.0 / est.product;
  return est;
}

PoissonReport poisson_diagnostics(std::span<const std::uint64_t> per_run_ks,
                                  std::optional<double> reference, double z_threshold) {
  if (per_run_ks.size() < 2) throw InputError("poisson_diagnostics: need at least two runs");
  std::vector<double> values(per_run_ks.begin(), per_run_ks.end());
  const auto m = stats::moments(values);
  PoissonReport report;
  report.mean = m.mean;
  report.variance = m.variance;
  if (m.variance > 0.0) report.dispersion_ratio = m.mean / m.variance;
  if (reference) {
    const double scale = std::sqrt(*reference / static_cast<double>(values.size()));
    if (scale > 0.0) {
      report.z_score = (m.mean - *reference) / scale;
      report.flagged = std::abs(*report.z_score) > z_threshold;
    } else {
      report.flagged = m.mean != *reference;
    }
  }
  return report;
}

double sample_bits_bound(int n) {
  const double nd = n;
  return 4.3 * nd * nd * nd * std::log(nd) * (std::ceil(std::log2(nd)) + 3.0);
}

double sample_comparisons_bound(int n) {
  const double nd = n;
  return 8.6 * nd * nd * nd * std::log(nd);
}

}  // namespace linext
