#ifndef LINEXT_ACCEPTANCE_HPP
#define LINEXT_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace linext::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // one-line summary of the measured values
  std::string report;  // full numeric record, compared byte for byte on re-runs
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

CriterionResult exact_counts(std::uint64_t seed);
CriterionResult chain_stationarity();
CriterionResult bounding_invariants(std::uint64_t seed);
CriterionResult sampler_distribution(std::uint64_t seed);
CriterionResult poisson_law(std::uint64_t seed);
CriterionResult two_phase_coverage(std::uint64_t seed);
CriterionResult interval_demo(std::uint64_t seed);
CriterionResult budget_bounds(std::uint64_t seed);
// Re-runs every randomized criterion with the same seed and compares reports;
// also checks that a parallel estimate matches the serial one.
CriterionResult determinism(std::uint64_t seed, const std::vector<CriterionResult>& first_pass);

// All nine in order; on_result fires as each one finishes.
std::vector<CriterionResult> run_all(std::uint64_t seed,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& result);

}  // namespace linext::acceptance

#endif
