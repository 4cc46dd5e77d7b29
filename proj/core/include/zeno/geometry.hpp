#pragma once

#include <memory>
#include <string>

#include "zeno/node_set.hpp"
#include "zeno/units.hpp"

namespace zeno {

/// Node-centred lattice on the (x1, x2) configuration square between plates
/// at 0 and L. Plates themselves are not stored: node i sits at (i + 1) * h
/// with h = L / (N + 1), and the wavefunction vanishes on the plates.
class Grid2D {
 public:
  static constexpr int min_points = 16;

  Grid2D(double plate_separation, int points_per_axis);

  double plate_separation() const noexcept { return length_; }
  int points_per_axis() const noexcept { return n_; }
  double spacing() const noexcept { return length_ / (n_ + 1); }
  double node(int i) const noexcept { return (i + 1) * spacing(); }

  bool operator==(const Grid2D&) const = default;

 private:
  double length_;
  int n_;
};

/// Ion charges (C) and masses (kg). Requires q1 >= q2 > 0.
struct ChargeConfig {
  double q1;
  double q2;
  double m1;
  double m2;

  static ChargeConfig protons(const PhysicalConstants& c = PhysicalConstants::codata2018());

  void validate() const;
  bool exchange_symmetric() const noexcept { return q1 == q2 && m1 == m2; }
};

/// Total force on the plates from both ions and their images.
double f_total(double x1, double x2, const ChargeConfig& charges, double plate_separation,
               double coulomb_k = PhysicalConstants::codata2018().coulomb_k);

/// Force threshold for a confinement region of length d centred between the plates.
double f_max(double d, const ChargeConfig& charges, double plate_separation,
             double coulomb_k = PhysicalConstants::codata2018().coulomb_k);

/// Relative band below f_max inside which a node is treated as on the boundary.
inline constexpr double boundary_tolerance = 1e-12;

/// The nodes where F_total < F_total^max(d): the zero-potential region of the
/// measurement-induced hard wall.
struct ConstraintMask {
  double d;
  std::shared_ptr<const NodeSet> nodes;

  std::int64_t inside_count() const noexcept { return nodes ? nodes->size() : 0; }
  bool inside(int i, int j) const noexcept { return nodes && nodes->contains(i, j); }
};

/// Row-wise construction in O(N log N): each x1 row of the region is a single
/// interval of x2 nodes centred on L/2. Throws EmptyRegionError when no node
/// satisfies the constraint.
ConstraintMask build_mask(const Grid2D& grid, double d, const ChargeConfig& charges,
                          double coulomb_k = PhysicalConstants::codata2018().coulomb_k);

/// Same set as build_mask, computed by testing every node (O(N^2)).
ConstraintMask build_mask_exhaustive(const Grid2D& grid, double d, const ChargeConfig& charges,
                                     double coulomb_k = PhysicalConstants::codata2018().coulomb_k);

/// Mask covering the whole square; used when the ions do not interact and the
/// force constraint is vacuous.
ConstraintMask full_square_mask(const Grid2D& grid);

/// Plain PBM ("P1") text: one row per x1 node, '1' inside, '0' outside.
std::string mask_to_pbm(const ConstraintMask& mask, const std::string& comment = {});

}  // namespace zeno
