#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeno/geometry.hpp"
#include "zeno/spectra.hpp"
#include "zeno/units.hpp"
#include "zeno/wavefunction.hpp"

namespace zeno {

/// Confinement lengths d_0 > d_1 > ... > d_n and per-step frequencies.
struct StepSchedule {
  std::vector<double> lengths;    // m
  std::vector<double> f_qze;      // Hz, one per step
  std::vector<double> f_confine;  // Hz, one per step
  double f_photon = 1e7;          // Hz

  std::size_t steps() const noexcept { return lengths.empty() ? 0 : lengths.size() - 1; }
  /// (d_i - d_{i+1}) / 2
  double reduction(std::size_t i) const { return 0.5 * (lengths.at(i) - lengths.at(i + 1)); }
  /// f_qze / f_confine for step i.
  std::int64_t checks_every(std::size_t i) const;
  void validate() const;
};

/// Overlap of psi with the inner region. Throws ShapeError unless the inner
/// mask is nested inside psi's source mask.
double confinement_probability(const Wavefunction& psi, const ConstraintMask& source_mask,
                               const ConstraintMask& inner_mask);

/// 1 / (f_confine P). Throws ZeroProbabilityError for P = 0.
double expected_time(double f_confine, double probability);
/// 2 h f_photon f_qze
double qze_power(double f_photon, double f_qze, const PhysicalConstants& c = PhysicalConstants::codata2018());
/// 2 h f_qze f_photon / (f_confine P)
double expected_energy_step(double f_qze, double f_photon, double f_confine, double probability,
                            const PhysicalConstants& c = PhysicalConstants::codata2018());
/// prod_i (1 - L_i)^(f_qze_i t_i). Throws ZeroProbabilityError if some L_i = 1.
double survival_probability(const std::vector<double>& leakages, const std::vector<double>& f_qze,
                            const std::vector<double>& expected_times);
/// E / P_survival. Throws ZeroProbabilityError for zero survival.
double adjusted_expected_energy(double expected_energy, double survival);
/// k q1^2 / d1 - k q1^2 / d0
double classical_delta_e(double d0, double d1, const ChargeConfig& charges,
                         double coulomb_k = PhysicalConstants::codata2018().coulomb_k);
/// E0(d1) - E0(d0). Throws InvariantViolation when negative.
double quantum_delta_e_bound(double e0_d0, double e0_d1);
/// (delta_e - adjusted_energy) / power. Negative means no advantage.
double time_advantage(double delta_e_quantum, double adjusted_energy, double qze_power);

/// Raw per-step inputs from which a ledger is composed.
struct StepIngredients {
  double d;
  double d_next;
  double e0;       // J, ground state at d
  double e0_next;  // J, ground state at d_next
  double probability;
  double leakage;
  double f_qze;
  double f_confine;
  double f_photon;
};

struct StepRecord {
  StepIngredients in;
  double expected_time;
  double qze_power;
  double expected_energy;
  double expected_measurements;  // f_qze * expected_time
  double survival_probability;
};

struct EnergyLedger {
  std::vector<StepRecord> steps;
  double expected_energy = 0.0;
  double survival_probability = 1.0;
  double adjusted_expected_energy = 0.0;
  double delta_e_quantum = 0.0;
  double delta_e_classical = 0.0;
  /// Power of the boundary held after the last step; zero for an empty ledger.
  double advantage_power = 0.0;
  std::optional<double> t_advantage;
};

EnergyLedger compose_ledger(const std::vector<StepIngredients>& steps, const ChargeConfig& charges,
                            double coulomb_k = PhysicalConstants::codata2018().coulomb_k,
                            const PhysicalConstants& c = PhysicalConstants::codata2018());

}  // namespace zeno
