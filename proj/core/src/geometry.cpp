#include "zeno/geometry.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

Grid2D::Grid2D(double plate_separation, int points_per_axis)
    : length_(plate_separation), n_(points_per_axis) {
  if (!(plate_separation > 0.0) || !std::isfinite(plate_separation)) {
    throw ValidationError("must be positive and finite", "plate_separation");
  }
  if (points_per_axis < min_points) {
    throw ValidationError("must be at least " + std::to_string(min_points) + " (got " +
                              std::to_string(points_per_axis) + ")",
                          "points_per_axis");
  }
}

ChargeConfig ChargeConfig::protons(const PhysicalConstants& c) {
  return {c.elementary_charge, c.elementary_charge, c.proton_mass, c.proton_mass};
}

void ChargeConfig::validate() const {
  if (!(q2 > 0.0)) throw ValidationError("must be positive", "q2");
  if (!(q1 >= q2)) throw ValidationError("ordering q1 >= q2 required", "q1");
  if (!(m1 > 0.0)) throw ValidationError("must be positive", "m1");
  if (!(m2 > 0.0)) throw ValidationError("must be positive", "m2");
}

double f_total(double x1, double x2, const ChargeConfig& c, double L, double k) {
  if (!(x1 > 0.0 && x1 < L) || !(x2 > 0.0 && x2 < L)) {
    throw DomainError("ion positions must lie strictly between the plates");
  }
  const double a = k * c.q1 * c.q1;
  const double b = k * c.q2 * c.q2;
  return a / (4.0 * x1 * x1) + b / (4.0 * x2 * x2) + a / (4.0 * (L - x1) * (L - x1)) +
         b / (4.0 * (L - x2) * (L - x2));
}

double f_max(double d, const ChargeConfig& c, double L, double k) {
  if (!(d > 0.0 && d < L)) throw DomainError("confinement length must satisfy 0 < d < L");
  const double a = k * c.q1 * c.q1;
  const double b = k * c.q2 * c.q2;
  return a / ((L - d) * (L - d)) + a / ((L + d) * (L + d)) + 2.0 * b / (L * L);
}

namespace {

struct MaskPredicate {
  const Grid2D& grid;
  const ChargeConfig& charges;
  double k;
  double threshold;

  bool operator()(int i, int j) const {
    const double L = grid.plate_separation();
    return f_total(grid.node(i), grid.node(j), charges, L, k) < threshold;
  }
};

MaskPredicate make_predicate(const Grid2D& grid, double d, const ChargeConfig& charges,
                             double k) {
  charges.validate();
  const double fm = f_max(d, charges, grid.plate_separation(), k);
  return MaskPredicate{grid, charges, k, fm * (1.0 - boundary_tolerance)};
}

ConstraintMask finish(double d, NodeSet nodes) {
  if (nodes.empty()) {
    std::ostringstream os;
    os << "force constraint for d = " << d << " admits no grid node";
    throw EmptyRegionError(os.str());
  }
  return ConstraintMask{d, std::make_shared<const NodeSet>(std::move(nodes))};
}

}  // namespace

ConstraintMask build_mask(const Grid2D& grid, double d, const ChargeConfig& charges, double k) {
  const MaskPredicate inside = make_predicate(grid, d, charges, k);
  const int n = grid.points_per_axis();
  const int centre_left = (n - 1) / 2;
  const int centre_right = n / 2;

  NodeSet::Builder b(n);
  for (int i = 0; i < n; ++i) {
    const bool left_in = inside(i, centre_left);
    const bool right_in = inside(i, centre_right);
    if (!left_in && !right_in) continue;

    int lo = centre_right;
    if (left_in) {
      // first inside node on [0, centre_left]; the row is an interval around L/2
      int a = 0, c = centre_left;
      while (a < c) {
        const int m = a + (c - a) / 2;
        if (inside(i, m)) c = m; else a = m + 1;
      }
      lo = a;
    }
    int hi = centre_left + 1;
    if (right_in) {
      // last inside node on [centre_right, n - 1]
      int a = centre_right, c = n - 1;
      while (a < c) {
        const int m = a + (c - a + 1) / 2;
        if (inside(i, m)) a = m; else c = m - 1;
      }
      hi = a + 1;
    }
    b.add(i, lo, hi);
  }
  return finish(d, std::move(b).finish());
}

ConstraintMask build_mask_exhaustive(const Grid2D& grid, double d, const ChargeConfig& charges,
                                     double k) {
  const MaskPredicate inside = make_predicate(grid, d, charges, k);
  return finish(d, NodeSet::from_predicate(grid.points_per_axis(), inside));
}

ConstraintMask full_square_mask(const Grid2D& grid) {
  return ConstraintMask{grid.plate_separation(),
                        std::make_shared<const NodeSet>(NodeSet::full(grid.points_per_axis()))};
}

std::string mask_to_pbm(const ConstraintMask& mask, const std::string& comment) {
  const int n = mask.nodes->points_per_axis();
  std::string out = "P1\n";
  if (!comment.empty()) out += "# " + comment + "\n";
  out += std::to_string(n) + " " + std::to_string(n) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(n) * (n + 1));
  for (int i = 0; i < n; ++i) {
    std::string row(static_cast<std::size_t>(n), '0');
    for (const Run& r : mask.nodes->row_runs(i)) {
      for (int j = r.begin; j < r.end; ++j) row[static_cast<std::size_t>(j)] = '1';
    }
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace zeno
