#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/geometry.hpp"
#include "zeno/operators.hpp"
#include "zeno/wavefunction.hpp"

namespace zeno {

struct GroundStateOptions {
  /// Relative residual ||H psi - E psi|| / |E| at which the solve stops.
  double tolerance = 1e-10;
  /// Cap on inverse-iteration solves (imaginary-time plus refinement).
  int max_iterations = 200;
  /// Seed of the perturbation added to the starting vector.
  std::uint64_t seed = 0x5eedULL;
  /// Backward-Euler imaginary-time steps before shift refinement starts.
  int imaginary_time_steps = 3;
  /// Imaginary-time step in units of 1 / (E_start - V_min).
  double imaginary_time_step = 50.0;

  void validate() const;
};

struct GroundStateResult {
  Wavefunction psi0;
  double energy;           // J
  double energy_internal;  // units of UnitSystem::energy_scale()
  double residual_norm;    // ||H psi - E psi|| / |E|
  int iterations;
  /// Rayleigh quotient after each solve (internal units). Non-increasing.
  std::vector<double> energy_history;
};

class GroundStateConvergenceError : public ConvergenceError {
 public:
  GroundStateConvergenceError(const std::string& what, GroundStateResult best)
      : ConvergenceError(what, best.residual_norm),
        best_(std::make_shared<GroundStateResult>(std::move(best))) {}

  const GroundStateResult& best() const noexcept { return *best_; }

 private:
  std::shared_ptr<GroundStateResult> best_;
};

/// Lowest eigenpair of H.
///
/// Starts from a seeded Gaussian (a symmetric pair placed at the two most
/// separated nodes when the ions interact, one centred Gaussian otherwise),
/// runs a few backward-Euler imaginary-time steps, then refines with shifted
/// inverse iteration whose shift sigma = E - ||r|| is accepted only when the
/// LDL^T factorization of H - sigma has no negative pivot (Sylvester inertia),
/// i.e. sigma lies below the ground-state energy. Every step applies a
/// positive decreasing function of H, so the Rayleigh quotient never rises.
GroundStateResult ground_state(const HamiltonianOperator& H, const GroundStateOptions& options = {});

/// Settings for solving on an energy window of a mask instead of the whole mask.
struct LocalizationOptions {
  bool enabled = true;
  /// Initial window height above the lowest potential on the mask, as a fraction of it.
  double window_fraction = 0.05;
  /// Required window height in units of (E0 - V_min); the window is enlarged and
  /// the solve repeated until it is met.
  double margin_factor = 4.0;
  int max_rounds = 4;

  void validate() const;
};

/// Mask nodes whose Coulomb energy lies below V_min + window_energy (J).
std::shared_ptr<const NodeSet> energy_window(const Grid2D& grid, const ConstraintMask& mask,
                                             const IonPair& ions, const UnitSystem& units,
                                             double window_energy);

/// Lowest potential energy (J) on the mask nodes.
double minimum_potential(const Grid2D& grid, const ConstraintMask& mask, const IonPair& ions);

struct ConfinedGroundState {
  GroundStateResult result;
  ConstraintMask mask;
  /// Support actually solved on: the mask itself or an energy window of it.
  std::shared_ptr<const NodeSet> support;
  double window_energy;  // J; zero when not localized
  int rounds;
  bool localized;
};

/// Ground state of the Hamiltonian confined to `mask`.
///
/// For interacting ions the state sits in the two lobes of largest separation
/// and decays like an Airy tail into the region of higher Coulomb energy, so
/// the solve runs on {V < V_min + W}; W starts at window_fraction * V_min and
/// grows until W >= margin_factor * (E0 - V_min), which puts the window edge
/// several decay lengths past the classical turning point.
ConfinedGroundState confined_ground_state(const Grid2D& grid, const ConstraintMask& mask,
                                          const IonPair& ions, const UnitSystem& units,
                                          const GroundStateOptions& options = {},
                                          const LocalizationOptions& localization = {});

}  // namespace zeno
