#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "zeno/geometry.hpp"
#include "zeno/node_set.hpp"

namespace zeno {

using Complex = std::complex<double>;

/// Two-ion wavefunction sampled on a node set of a Grid2D.
///
/// Amplitudes are stored in cell-integrated form c = psi * h, so that
/// sum |c|^2 equals the integral of |psi|^2 over the square and is unit-free.
/// Amplitudes outside the support are implicitly zero.
class Wavefunction {
 public:
  static constexpr double norm_tolerance = 1e-10;

  /// Takes ownership of already normalized amplitudes; throws ValidationError
  /// when the norm deviates from 1 by more than norm_tolerance.
  Wavefunction(Grid2D grid, std::shared_ptr<const NodeSet> support,
               std::vector<Complex> amplitudes);

  /// Normalizes `amplitudes` first. Throws ZeroProbabilityError for a zero vector.
  static Wavefunction normalized(Grid2D grid, std::shared_ptr<const NodeSet> support,
                                 std::vector<Complex> amplitudes);

  const Grid2D& grid() const noexcept { return grid_; }
  const NodeSet& support() const noexcept { return *support_; }
  const std::shared_ptr<const NodeSet>& support_ptr() const noexcept { return support_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(amplitudes_.size()); }

  double norm() const noexcept;

  /// Cell-integrated amplitude at node (i, j); zero outside the support.
  Complex amplitude(int i, int j) const noexcept;
  /// Pointwise psi(x1, x2) = c / h in 1/m.
  Complex value(int i, int j) const noexcept { return amplitude(i, j) / grid_.spacing(); }

  /// Probability mass on the nodes of `region`.
  double probability_in(const NodeSet& region) const;

  /// Same state on a superset support, zero-padded. Throws ShapeError otherwise.
  Wavefunction embedded(std::shared_ptr<const NodeSet> superset) const;

 private:
  Grid2D grid_;
  std::shared_ptr<const NodeSet> support_;
  std::vector<Complex> amplitudes_;
};

double squared_norm(std::span<const Complex> v) noexcept;

}  // namespace zeno
