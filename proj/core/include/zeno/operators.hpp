#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "zeno/geometry.hpp"
#include "zeno/units.hpp"
#include "zeno/wavefunction.hpp"

namespace zeno {

/// The interacting ion pair: charges, masses, Coulomb constant and the
/// short-distance regularization length (m) of the Coulomb potential.
/// With `interacting == false` the Coulomb term is dropped entirely.
struct IonPair {
  ChargeConfig charges = ChargeConfig::protons();
  double coulomb_k = PhysicalConstants::codata2018().coulomb_k;
  double epsilon = 1e-15;
  bool interacting = true;

  /// k * q1 * q2 in J*m, zero when non-interacting.
  double coupling() const noexcept {
    return interacting ? coulomb_k * charges.q1 * charges.q2 : 0.0;
  }
  void validate() const;
};

/// V = k q1 q2 / sqrt((x1 - x2)^2 + eps^2), in J. Finite everywhere for eps > 0.
double coulomb_potential(double x1, double x2, const ChargeConfig& charges, double epsilon,
                         double coulomb_k = PhysicalConstants::codata2018().coulomb_k);

/// Finite-difference two-ion Hamiltonian restricted to a node set, with
/// Dirichlet conditions on every node outside it. Stored in CSR form over the
/// compressed node indexing, in internal units (hbar = 1).
class HamiltonianOperator {
 public:
  HamiltonianOperator(Grid2D grid, std::shared_ptr<const NodeSet> support, IonPair ions,
                      UnitSystem units);

  const Grid2D& grid() const noexcept { return grid_; }
  const NodeSet& support() const noexcept { return *support_; }
  const std::shared_ptr<const NodeSet>& support_ptr() const noexcept { return support_; }
  const IonPair& ions() const noexcept { return ions_; }
  const UnitSystem& units() const noexcept { return units_; }
  std::int64_t size() const noexcept { return support_->size(); }

  /// Internal potential energy on each support node.
  std::span<const double> potential() const noexcept { return potential_; }
  double min_potential() const noexcept { return min_potential_; }
  double max_potential() const noexcept { return max_potential_; }
  /// hbar^2 / (2 m_k h^2) for each ion, internal units.
  double hopping1() const noexcept { return hop1_; }
  double hopping2() const noexcept { return hop2_; }

  std::span<const std::int64_t> row_offsets() const noexcept { return row_ptr_; }
  std::span<const std::int64_t> columns() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return vals_; }
  double diagonal(std::int64_t k) const noexcept { return potential_[static_cast<std::size_t>(k)] + 2.0 * (hop1_ + hop2_); }

  void apply(std::span<const double> in, std::span<double> out) const;
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  /// <u|H|v> in internal units.
  Complex inner(std::span<const Complex> u, std::span<const Complex> v) const;

 private:
  Grid2D grid_;
  std::shared_ptr<const NodeSet> support_;
  IonPair ions_;
  UnitSystem units_;
  double hop1_ = 0.0;
  double hop2_ = 0.0;
  double min_potential_ = 0.0;
  double max_potential_ = 0.0;
  std::vector<double> potential_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int64_t> cols_;
  std::vector<double> vals_;
};

/// Hamiltonian with the hard wall of `mask`. Throws EmptyRegionError for an empty mask.
HamiltonianOperator assemble(const Grid2D& grid, const ConstraintMask& mask, const IonPair& ions,
                             const UnitSystem& units);

/// Hamiltonian on an arbitrary support (full square for free evolution,
/// localized windows for large grids).
HamiltonianOperator assemble_on(const Grid2D& grid, std::shared_ptr<const NodeSet> support,
                                const IonPair& ions, const UnitSystem& units);

/// <psi|H|psi> in J. Throws ShapeError when psi does not live on H's support.
double expectation_energy(const HamiltonianOperator& H, const Wavefunction& psi);
/// Full complex <psi|H|psi> in internal units; the imaginary part measures Hermiticity error.
Complex expectation_value_internal(const HamiltonianOperator& H, const Wavefunction& psi);

}  // namespace zeno
