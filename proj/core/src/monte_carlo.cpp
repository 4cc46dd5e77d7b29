#include "zeno/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Trial {
  double ticks_time = 0.0;
  double energy = 0.0;
  std::int64_t restarts = 0;
};

struct Counters {
  std::vector<std::int64_t> checks, successes;
  std::vector<std::vector<std::int64_t>> histogram;

  Counters(std::size_t steps, int bins)
      : checks(steps), successes(steps), histogram(steps, std::vector<std::int64_t>(static_cast<std::size_t>(bins))) {}

  void merge(const Counters& o) {
    for (std::size_t i = 0; i < checks.size(); ++i) {
      checks[i] += o.checks[i];
      successes[i] += o.successes[i];
      for (std::size_t b = 0; b < histogram[i].size(); ++b) histogram[i][b] += o.histogram[i][b];
    }
  }
};

struct StepPlan {
  double p, leak, tick_time, tick_energy;
  std::int64_t every;
};

Trial run_trial(const std::vector<StepPlan>& plan, std::mt19937_64& rng, Counters& counters) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Trial t;
  const auto bins = counters.histogram.empty() ? 0 : counters.histogram[0].size();
  for (;;) {
    bool leaked = false;
    for (std::size_t i = 0; i < plan.size() && !leaked; ++i) {
      const StepPlan& s = plan[i];
      std::int64_t attempts = 0;
      for (std::int64_t tick = 1;; ++tick) {
        t.ticks_time += s.tick_time;
        t.energy += s.tick_energy;
        if (s.leak > 0.0 && u(rng) < s.leak) {
          leaked = true;
          break;
        }
        if (tick % s.every != 0) continue;
        ++attempts;
        ++counters.checks[i];
        if (u(rng) < s.p) {
          ++counters.successes[i];
          const auto bin = std::min<std::size_t>(static_cast<std::size_t>(attempts), bins) - 1;
          ++counters.histogram[i][bin];
          break;
        }
      }
    }
    if (!leaked) return t;
    ++t.restarts;
  }
}

SampleEstimate estimate(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

void MonteCarloOptions::validate() const {
  if (trials < 1) throw ValidationError("must be at least 1", "monte_carlo.trials");
  if (threads < 0) throw ValidationError("must be non-negative", "monte_carlo.threads");
  if (histogram_bins < 2) throw ValidationError("must be at least 2", "monte_carlo.histogram_bins");
}

MonteCarloSummary monte_carlo(const std::vector<MonteCarloStep>& steps,
                              const MonteCarloOptions& options, const PhysicalConstants& c) {
  options.validate();
  std::vector<StepPlan> plan;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const MonteCarloStep& s = steps[i];
    const std::string idx = "[" + std::to_string(i) + "]";
    if (!(s.probability > 0.0 && s.probability <= 1.0)) {
      throw ValidationError("must lie in (0, 1]", "monte_carlo.probability" + idx);
    }
    if (!(s.leakage >= 0.0 && s.leakage < 1.0)) {
      throw ValidationError("must lie in [0, 1)", "monte_carlo.leakage" + idx);
    }
    if (!(s.f_confine > 0.0 && s.f_qze >= s.f_confine)) {
      throw ValidationError("needs f_qze >= f_confine > 0", "monte_carlo.f_qze" + idx);
    }
    plan.push_back({s.probability, s.leakage, 1.0 / s.f_qze, 2.0 * c.h * s.f_photon,
                    std::max<std::int64_t>(1, std::llround(s.f_qze / s.f_confine))});
  }

  const auto n = options.trials;
  std::vector<Trial> trials(static_cast<std::size_t>(n));
  unsigned workers = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n));
  std::vector<Counters> partial(workers, Counters(steps.size(), options.histogram_bins));

  auto work = [&](unsigned w) {
    const std::int64_t begin = n * w / workers, end = n * (w + 1) / workers;
    for (std::int64_t t = begin; t < end; ++t) {
      std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(t))));
      trials[static_cast<std::size_t>(t)] = run_trial(plan, rng, partial[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  Counters total(steps.size(), options.histogram_bins);
  for (const Counters& p : partial) total.merge(p);

  std::vector<double> time(trials.size()), energy(trials.size()), restarts(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    time[t] = trials[t].ticks_time;
    energy[t] = trials[t].energy;
    restarts[t] = static_cast<double>(trials[t].restarts);
  }

  MonteCarloSummary out;
  out.trials = n;
  out.seed = options.seed;
  out.total_time = estimate(time);
  out.total_energy = estimate(energy);
  out.restarts = estimate(restarts);
  out.checks = total.checks;
  out.successes = total.successes;
  out.attempt_histogram = total.histogram;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double cks = static_cast<double>(total.checks[i]);
    const double p = static_cast<double>(total.successes[i]) / cks;
    const double se_p = std::sqrt(p * (1.0 - p) / cks);
    out.attempts.push_back({1.0 / p, se_p / (p * p)});
  }
  return out;
}

double renewal_expected_energy(const std::vector<MonteCarloStep>& steps, const PhysicalConstants& c) {
  // One run: in each block of r ticks the run leaks with 1 - s^r, else the
  // check ends the step with probability P. Runs repeat until one completes.
  double ticks_energy = 0.0;
  double reach = 1.0;
  for (const MonteCarloStep& st : steps) {
    const double r = std::max(1.0, std::round(st.f_qze / st.f_confine));
    const double s = 1.0 - st.leakage;
    const double sr = std::pow(s, r);
    const double block_ticks = st.leakage > 0.0 ? (1.0 - sr) / st.leakage : r;
    const double q = sr * (1.0 - st.probability);
    ticks_energy += reach * (block_ticks / (1.0 - q)) * 2.0 * c.h * st.f_photon;
    reach *= sr * st.probability / (1.0 - q);
  }
  if (reach == 0.0) throw ZeroProbabilityError("no run can complete");
  return ticks_energy / reach;
}

std::pair<double, int> geometric_chi_squared(const std::vector<std::int64_t>& histogram, double p) {
  if (histogram.size() < 2) throw ValidationError("needs at least two bins", "histogram");
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("must lie in (0, 1]", "p");
  double n = 0.0;
  for (auto h : histogram) n += static_cast<double>(h);
  std::vector<double> expected(histogram.size());
  for (std::size_t k = 0; k + 1 < histogram.size(); ++k) expected[k] = n * p * std::pow(1.0 - p, static_cast<double>(k));
  expected.back() = n * std::pow(1.0 - p, static_cast<double>(histogram.size() - 1));

  std::vector<double> obs_pooled, exp_pooled;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    o_acc += static_cast<double>(histogram[k]);
    e_acc += expected[k];
    if (e_acc >= 5.0) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_pooled.empty()) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
    } else {
      obs_pooled.back() += o_acc;
      exp_pooled.back() += e_acc;
    }
  }
  double chi2 = 0.0;
  for (std::size_t k = 0; k < obs_pooled.size(); ++k) {
    const double d = obs_pooled[k] - exp_pooled[k];
    chi2 += d * d / exp_pooled[k];
  }
  return {chi2, static_cast<int>(obs_pooled.size()) - 1};
}

}  // namespace zeno
