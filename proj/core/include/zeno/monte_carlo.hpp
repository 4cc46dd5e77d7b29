#pragma once

#include <cstdint>
#include <vector>

#include "zeno/units.hpp"

namespace zeno {

/// Per-step inputs of the measurement sampler.
struct MonteCarloStep {
  double probability;  // success of one confinement check
  double leakage;      // failure of one QZE measurement
  double f_qze;
  double f_confine;
  double f_photon;
};

struct MonteCarloOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 0x5eedULL;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  int threads = 0;
  /// Attempt-count histogram covers 1..bins, the last bin collects the overflow.
  int histogram_bins = 40;

  void validate() const;
};

struct SampleEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct MonteCarloSummary {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  SampleEstimate total_time;    // s, including time lost to restarts
  SampleEstimate total_energy;  // J, including energy spent on failed runs
  SampleEstimate restarts;
  /// Confinement checks per success, per step (ratio estimator of 1 / P).
  std::vector<SampleEstimate> attempts;
  std::vector<std::int64_t> checks;
  std::vector<std::int64_t> successes;
  /// Number of checks needed by each completed step, binned 1..bins.
  std::vector<std::vector<std::int64_t>> attempt_histogram;
};

/// Simulates the protocol tick by tick: each QZE measurement costs 2 h f_photon
/// and fails with the step's leakage, which restarts the experiment from step
/// 0 at no cost; every (f_qze / f_confine)-th tick is also a confinement check
/// that succeeds with the step's probability. Trial t draws from its own
/// generator seeded from (seed, t), so results are reproducible and independent
/// of the thread count.
MonteCarloSummary monte_carlo(const std::vector<MonteCarloStep>& steps,
                              const MonteCarloOptions& options,
                              const PhysicalConstants& c = PhysicalConstants::codata2018());

/// Exact expected total energy of the simulated process (renewal argument),
/// to compare against the closed-form adjusted expectation.
double renewal_expected_energy(const std::vector<MonteCarloStep>& steps,
                               const PhysicalConstants& c = PhysicalConstants::codata2018());

/// Pearson chi-squared statistic of a histogram against a geometric law with
/// success probability p, pooling bins with expected count below 5.
/// Returns {statistic, degrees of freedom}.
std::pair<double, int> geometric_chi_squared(const std::vector<std::int64_t>& histogram, double p);

}  // namespace zeno
