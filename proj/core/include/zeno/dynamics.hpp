#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "zeno/geometry.hpp"
#include "zeno/operators.hpp"
#include "zeno/wavefunction.hpp"

namespace zeno {

struct EvolutionParams {
  double dt;         // s
  int n_sub = 16;    // substeps per measurement interval
  double solver_tol = 1e-12;
  int max_iterations = 500;

  /// dt = 1 / (f_qze * n_sub).
  static EvolutionParams from_frequency(double f_qze, int n_sub = 16, double solver_tol = 1e-12);
  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Crank-Nicolson propagator (1 + i dt H / 2) psi' = (1 - i dt H / 2) psi for a
/// fixed H and dt. The complex-symmetric system is solved by Jacobi
/// preconditioned conjugate orthogonal CG.
class CrankNicolson {
 public:
  CrankNicolson(const HamiltonianOperator& H, double dt, double solver_tol = 1e-12,
                int max_iterations = 500);

  /// One step in place. Throws ConvergenceError on overrun.
  SolveStats step(std::vector<Complex>& psi);
  double dt() const noexcept { return dt_; }
  const HamiltonianOperator& hamiltonian() const noexcept { return H_; }

 private:
  const HamiltonianOperator& H_;
  double dt_;
  double half_;  // dt / 2 in internal time units
  double tol_;
  int max_iterations_;
  std::vector<Complex> inv_diag_;
  std::vector<Complex> rhs_, r_, z_, p_, q_, hv_;
};

/// One CN step. psi may live on any subset of H's support and is zero-padded first.
Wavefunction cn_step(const HamiltonianOperator& H_free, const Wavefunction& psi, double dt,
                     double solver_tol = 1e-12, int max_iterations = 500);

/// Norm and energy (J) after every substep.
struct EvolutionTrace {
  std::vector<double> norm;
  std::vector<double> energy;
  int max_solver_iterations = 0;
};

/// Composition of round(t_total / params.dt) CN steps of equal size
/// t_total / steps. t_total = 0 returns psi embedded in H's support.
Wavefunction evolve(const HamiltonianOperator& H_free, const Wavefunction& psi, double t_total,
                    const EvolutionParams& params, EvolutionTrace* trace = nullptr);

struct MeasurementOutcome {
  double success_probability = 0.0;
  double leaked_probability = 0.0;
  /// psi restricted to the mask and renormalized; empty when nothing lies inside.
  std::optional<Wavefunction> post_state;
  bool zero_probability = false;
};

/// Projective confinement measurement onto the mask.
MeasurementOutcome project(const Wavefunction& psi, const ConstraintMask& mask);

/// Lattice region on which free evolution over t_total is carried out. Small
/// grids use the whole square; large grids use the state's support dilated by
/// many diffusion lengths sqrt(hbar t / m), beyond which the evolved amplitude
/// is negligible.
std::shared_ptr<const NodeSet> evolution_region(const Wavefunction& psi, double t_total,
                                                const IonPair& ions, const UnitSystem& units,
                                                int full_square_limit = 2048);

/// Probability outside mask_d after free evolution of psi_d for t_qze.
double leakage(const Wavefunction& psi_d, const HamiltonianOperator& H_free, double t_qze,
               const ConstraintMask& mask_d, const EvolutionParams& params);

/// Convenience overload that assembles the free Hamiltonian on evolution_region.
double leakage(const Wavefunction& psi_d, const IonPair& ions, const UnitSystem& units,
               double t_qze, const ConstraintMask& mask_d, const EvolutionParams& params);

}  // namespace zeno
