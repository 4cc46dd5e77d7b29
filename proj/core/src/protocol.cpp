#include "zeno/protocol.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

void require_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("must lie in [0, 1]", field);
}

}  // namespace

std::int64_t StepSchedule::checks_every(std::size_t i) const {
  return std::llround(f_qze.at(i) / f_confine.at(i));
}

void StepSchedule::validate() const {
  if (lengths.empty()) throw ValidationError("needs at least d_0", "schedule.lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw ValidationError("must be positive", "schedule.lengths[" + std::to_string(i) + "]");
    }
    if (i > 0 && !(lengths[i] < lengths[i - 1])) {
      throw ValidationError("must be strictly decreasing", "schedule.lengths[" + std::to_string(i) + "]");
    }
  }
  if (f_qze.size() != steps()) throw ValidationError("needs one entry per step", "schedule.f_qze");
  if (f_confine.size() != steps()) throw ValidationError("needs one entry per step", "schedule.f_confine");
  if (!(f_photon > 0.0)) throw ValidationError("must be positive", "schedule.f_photon");
  for (std::size_t i = 0; i < steps(); ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    if (!(f_confine[i] > 0.0)) throw ValidationError("must be positive", "schedule.f_confine" + idx);
    if (!(f_qze[i] >= f_confine[i])) throw ValidationError("must be at least f_confine", "schedule.f_qze" + idx);
    const double ratio = f_qze[i] / f_confine[i];
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ValidationError("f_qze / f_confine must be an integer", "schedule.f_qze" + idx);
    }
  }
}

double confinement_probability(const Wavefunction& psi, const ConstraintMask& source_mask,
                               const ConstraintMask& inner_mask) {
  if (!source_mask.nodes || !inner_mask.nodes) throw ShapeError("mask has no nodes");
  if (!inner_mask.nodes->subset_of(*source_mask.nodes)) {
    throw ShapeError("inner mask is not nested inside the state's mask");
  }
  if (!psi.support().subset_of(*source_mask.nodes)) {
    throw ShapeError("state is not supported inside its source mask");
  }
  return psi.probability_in(*inner_mask.nodes);
}

double expected_time(double f_confine, double probability) {
  if (!(f_confine > 0.0)) throw ValidationError("must be positive", "f_confine");
  require_probability(probability, "probability");
  if (probability == 0.0) throw ZeroProbabilityError("confinement probability is zero; expected time is unbounded");
  return 1.0 / (f_confine * probability);
}

double qze_power(double f_photon, double f_qze, const PhysicalConstants& c) {
  if (!(f_photon >= 0.0)) throw ValidationError("must be non-negative", "f_photon");
  if (!(f_qze >= 0.0)) throw ValidationError("must be non-negative", "f_qze");
  return 2.0 * c.h * f_photon * f_qze;
}

double expected_energy_step(double f_qze, double f_photon, double f_confine, double probability,
                            const PhysicalConstants& c) {
  return qze_power(f_photon, f_qze, c) * expected_time(f_confine, probability);
}

double survival_probability(const std::vector<double>& leakages, const std::vector<double>& f_qze,
                            const std::vector<double>& expected_times) {
  if (leakages.size() != f_qze.size() || leakages.size() != expected_times.size()) {
    throw ShapeError("survival inputs differ in length");
  }
  double log_s = 0.0;
  for (std::size_t i = 0; i < leakages.size(); ++i) {
    require_probability(leakages[i], "leakage");
    if (leakages[i] == 1.0) throw ZeroProbabilityError("leakage of 1 gives zero survival");
    log_s += f_qze[i] * expected_times[i] * std::log1p(-leakages[i]);
  }
  return std::exp(log_s);
}

double adjusted_expected_energy(double expected_energy, double survival) {
  require_probability(survival, "survival");
  if (survival == 0.0) throw ZeroProbabilityError("zero survival probability");
  return expected_energy / survival;
}

double classical_delta_e(double d0, double d1, const ChargeConfig& charges, double coulomb_k) {
  if (!(d0 > 0.0 && d1 > 0.0)) throw ValidationError("lengths must be positive", "d");
  const double kq2 = coulomb_k * charges.q1 * charges.q1;
  return kq2 / d1 - kq2 / d0;
}

double quantum_delta_e_bound(double e0_d0, double e0_d1) {
  const double de = e0_d1 - e0_d0;
  if (de < 0.0) {
    std::ostringstream os;
    os << "ground-state energy fell from " << e0_d0 << " J to " << e0_d1 << " J on a smaller region";
    throw InvariantViolation(os.str());
  }
  return de;
}

double time_advantage(double delta_e_quantum, double adjusted_energy, double power) {
  if (!(power > 0.0)) throw ValidationError("must be positive", "qze_power");
  return (delta_e_quantum - adjusted_energy) / power;
}

EnergyLedger compose_ledger(const std::vector<StepIngredients>& steps, const ChargeConfig& charges,
                            double coulomb_k, const PhysicalConstants& c) {
  EnergyLedger ledger;
  if (steps.empty()) return ledger;

  std::vector<double> leak, fq, times;
  for (const StepIngredients& s : steps) {
    StepRecord r{s, 0.0, 0.0, 0.0, 0.0, 0.0};
    r.expected_time = expected_time(s.f_confine, s.probability);
    r.qze_power = qze_power(s.f_photon, s.f_qze, c);
    r.expected_energy = r.qze_power * r.expected_time;
    r.expected_measurements = s.f_qze * r.expected_time;
    r.survival_probability = survival_probability({s.leakage}, {s.f_qze}, {r.expected_time});
    ledger.expected_energy += r.expected_energy;
    leak.push_back(s.leakage);
    fq.push_back(s.f_qze);
    times.push_back(r.expected_time);
    ledger.steps.push_back(r);
  }
  ledger.survival_probability = survival_probability(leak, fq, times);
  ledger.adjusted_expected_energy = adjusted_expected_energy(ledger.expected_energy, ledger.survival_probability);

  const StepIngredients& first = steps.front();
  const StepIngredients& last = steps.back();
  ledger.delta_e_quantum = quantum_delta_e_bound(first.e0, last.e0_next);
  ledger.delta_e_classical = classical_delta_e(first.d, last.d_next, charges, coulomb_k);
  ledger.advantage_power = ledger.steps.back().qze_power;
  if (ledger.advantage_power > 0.0) {
    ledger.t_advantage = time_advantage(ledger.delta_e_quantum, ledger.adjusted_expected_energy,
                                        ledger.advantage_power);
  }
  return ledger;
}

}  // namespace zeno
