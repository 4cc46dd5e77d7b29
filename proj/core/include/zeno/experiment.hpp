#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zeno/config.hpp"
#include "zeno/monte_carlo.hpp"
#include "zeno/protocol.hpp"
#include "zeno/spectra.hpp"

namespace zeno {

struct GroundStateRecord {
  double d;
  ConfinedGroundState state;
};

struct ProtocolRun {
  ProtocolConfig config;
  EnergyLedger ledger;
  /// One entry per confinement length d_0 ... d_n (empty for a zero-step schedule).
  std::vector<GroundStateRecord> ground_states;
  std::optional<MonteCarloSummary> monte_carlo;
  std::vector<std::string> notes;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Ground state of H_d for one confinement length, on the configured grid.
/// A non-interacting configuration solves on the full square.
ConfinedGroundState solve_confined(const ProtocolConfig& config, double d);

/// Runs every step of the schedule and composes the ledger. Errors raised
/// inside a step are rethrown as ProtocolStepError carrying the step index.
ProtocolRun run_protocol(const ProtocolConfig& config, const ProgressFn& progress = {});

/// Monte Carlo inputs taken from a composed ledger.
std::vector<MonteCarloStep> monte_carlo_steps(const EnergyLedger& ledger);

}  // namespace zeno
