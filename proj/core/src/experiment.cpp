#include "zeno/experiment.hpp"

#include <sstream>

#include "zeno/dynamics.hpp"
#include "zeno/errors.hpp"

namespace zeno {

ConfinedGroundState solve_confined(const ProtocolConfig& config, double d) {
  const Grid2D grid = config.grid();
  const IonPair ions = config.ions();
  const UnitSystem units = config.units();
  if (!config.interacting) {
    const ConstraintMask square = full_square_mask(grid);
    LocalizationOptions off = config.localization;
    off.enabled = false;
    return confined_ground_state(grid, square, ions, units, config.solver, off);
  }
  const ConstraintMask mask = build_mask(grid, d, config.charges, config.coulomb_k);
  return confined_ground_state(grid, mask, ions, units, config.solver, config.localization);
}

std::vector<MonteCarloStep> monte_carlo_steps(const EnergyLedger& ledger) {
  std::vector<MonteCarloStep> out;
  for (const StepRecord& r : ledger.steps) {
    out.push_back({r.in.probability, r.in.leakage, r.in.f_qze, r.in.f_confine, r.in.f_photon});
  }
  return out;
}

ProtocolRun run_protocol(const ProtocolConfig& config, const ProgressFn& progress) {
  config.validate();
  auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };

  ProtocolRun run;
  run.config = config;
  const StepSchedule& sch = config.schedule;
  const std::size_t n = sch.steps();
  if (n == 0) {
    run.notes.push_back("zero-step schedule: nothing to confine");
    return run;
  }

  const Grid2D grid = config.grid();
  const IonPair ions = config.ions();
  const UnitSystem units = config.units();

  std::vector<ConstraintMask> masks;
  for (std::size_t i = 0; i <= n; ++i) {
    try {
      masks.push_back(build_mask(grid, sch.lengths[i], config.charges, config.coulomb_k));
    } catch (const Error& e) {
      throw ProtocolStepError(e, i == 0 ? 0 : i - 1);
    }
  }

  for (std::size_t i = 0; i <= n; ++i) {
    std::ostringstream os;
    os << "ground state d=" << sch.lengths[i];
    say(os.str());
    try {
      ConfinedGroundState gs =
          confined_ground_state(grid, masks[i], ions, units, config.solver, config.localization);
      run.ground_states.push_back({sch.lengths[i], std::move(gs)});
    } catch (const Error& e) {
      throw ProtocolStepError(e, i == 0 ? 0 : i - 1);
    }
  }

  std::vector<StepIngredients> ingredients;
  std::optional<Wavefunction> state = run.ground_states[0].state.result.psi0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const double p = confinement_probability(*state, masks[i], masks[i + 1]);
      if (p == 0.0) throw ZeroProbabilityError("confinement probability is zero");
      double leak = 0.0;
      if (config.compute_leakage) {
        std::ostringstream os;
        os << "leakage step " << i;
        say(os.str());
        leak = leakage(*state, ions, units, 1.0 / sch.f_qze[i], masks[i], config.evolution(i));
      }
      ingredients.push_back({sch.lengths[i], sch.lengths[i + 1], run.ground_states[i].state.result.energy,
                             run.ground_states[i + 1].state.result.energy, p, leak, sch.f_qze[i],
                             sch.f_confine[i], sch.f_photon});
      if (config.post_success == PostSuccessModel::ground_state) {
        state = run.ground_states[i + 1].state.result.psi0;
      } else {
        MeasurementOutcome m = project(*state, masks[i + 1]);
        if (m.zero_probability) throw ZeroProbabilityError("projection onto the next region is empty");
        state = std::move(m.post_state);
      }
    } catch (const ProtocolStepError&) {
      throw;
    } catch (const Error& e) {
      throw ProtocolStepError(e, i);
    }
  }

  run.ledger = compose_ledger(ingredients, config.charges, config.coulomb_k, units.constants());
  run.notes.push_back("delta_e_quantum is a lower bound on the quantum energy gain");
  run.notes.push_back("t_advantage divides by the QZE power of the final step");
  if (!config.compute_leakage) run.notes.push_back("leakage not computed; survival probability is 1");
  if (config.post_success == PostSuccessModel::projected) {
    run.notes.push_back("post-success state is the projected state, not the next ground state");
  }

  if (config.monte_carlo_trials > 0) {
    say("monte carlo");
    MonteCarloOptions mc;
    mc.trials = config.monte_carlo_trials;
    mc.seed = config.seed;
    mc.threads = config.threads;
    run.monte_carlo = monte_carlo(monte_carlo_steps(run.ledger), mc, units.constants());
  }
  return run;
}

}  // namespace zeno
