#include "zeno/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zeno/errors.hpp"

namespace zeno {

void IonPair::validate() const {
  charges.validate();
  if (!(coulomb_k > 0.0)) throw ValidationError("must be positive", "coulomb_k");
  if (!(epsilon > 0.0)) throw ValidationError("must be positive", "epsilon");
}

double coulomb_potential(double x1, double x2, const ChargeConfig& charges, double epsilon,
                         double k) {
  if (!(epsilon > 0.0)) throw ValidationError("must be positive", "epsilon");
  const double dx = x1 - x2;
  return k * charges.q1 * charges.q2 / std::sqrt(dx * dx + epsilon * epsilon);
}

HamiltonianOperator::HamiltonianOperator(Grid2D grid, std::shared_ptr<const NodeSet> support,
                                         IonPair ions, UnitSystem units)
    : grid_(grid), support_(std::move(support)), ions_(ions), units_(units) {
  if (!support_) throw ShapeError("Hamiltonian needs a support");
  if (support_->points_per_axis() != grid_.points_per_axis()) {
    throw ShapeError("support lattice does not match the grid");
  }
  if (support_->empty()) throw EmptyRegionError("cannot assemble a Hamiltonian on an empty region");
  ions_.validate();

  const double h = to_internal(grid_.spacing(), QuantityKind::length, units_);
  const double m1 = to_internal(ions_.charges.m1, QuantityKind::mass, units_);
  const double m2 = to_internal(ions_.charges.m2, QuantityKind::mass, units_);
  hop1_ = 1.0 / (2.0 * m1 * h * h);
  hop2_ = 1.0 / (2.0 * m2 * h * h);

  const double lambda = to_internal(ions_.coupling(), QuantityKind::charge_coupling, units_);
  const double eps = to_internal(ions_.epsilon, QuantityKind::length, units_);

  const auto n = static_cast<std::size_t>(support_->size());
  potential_.resize(n);
  row_ptr_.resize(n + 1);
  cols_.reserve(5 * n);
  vals_.reserve(5 * n);
  min_potential_ = std::numeric_limits<double>::infinity();
  max_potential_ = -std::numeric_limits<double>::infinity();

  const NodeSet& s = *support_;
  s.for_each([&](int i, int j, std::int64_t k) {
    const double dx = (i - j) * h;
    const double v = lambda == 0.0 ? 0.0 : lambda / std::sqrt(dx * dx + eps * eps);
    potential_[static_cast<std::size_t>(k)] = v;
    min_potential_ = std::min(min_potential_, v);
    max_potential_ = std::max(max_potential_, v);

    row_ptr_[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(cols_.size());
    // column-sorted: (i-1, j), (i, j-1), (i, j), (i, j+1), (i+1, j)
    const std::int64_t up = s.index(i - 1, j);
    if (up >= 0) { cols_.push_back(up); vals_.push_back(-hop1_); }
    const std::int64_t left = s.index(i, j - 1);
    if (left >= 0) { cols_.push_back(left); vals_.push_back(-hop2_); }
    cols_.push_back(k);
    vals_.push_back(v + 2.0 * (hop1_ + hop2_));
    const std::int64_t right = s.index(i, j + 1);
    if (right >= 0) { cols_.push_back(right); vals_.push_back(-hop2_); }
    const std::int64_t down = s.index(i + 1, j);
    if (down >= 0) { cols_.push_back(down); vals_.push_back(-hop1_); }
  });
  row_ptr_[n] = static_cast<std::int64_t>(cols_.size());
}

void HamiltonianOperator::apply(std::span<const double> in, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(size());
  if (in.size() != n || out.size() != n) throw ShapeError("vector length does not match operator");
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (auto p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      acc += vals_[static_cast<std::size_t>(p)] * in[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])];
    }
    out[r] = acc;
  }
}

void HamiltonianOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const auto n = static_cast<std::size_t>(size());
  if (in.size() != n || out.size() != n) throw ShapeError("vector length does not match operator");
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc{};
    for (auto p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      acc += vals_[static_cast<std::size_t>(p)] * in[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])];
    }
    out[r] = acc;
  }
}

Complex HamiltonianOperator::inner(std::span<const Complex> u, std::span<const Complex> v) const {
  std::vector<Complex> hv(v.size());
  apply(v, hv);
  Complex acc{};
  for (std::size_t k = 0; k < hv.size(); ++k) acc += std::conj(u[k]) * hv[k];
  return acc;
}

HamiltonianOperator assemble(const Grid2D& grid, const ConstraintMask& mask, const IonPair& ions,
                             const UnitSystem& units) {
  if (!mask.nodes || mask.nodes->empty()) {
    throw EmptyRegionError("cannot assemble a Hamiltonian on an empty mask");
  }
  return HamiltonianOperator(grid, mask.nodes, ions, units);
}

HamiltonianOperator assemble_on(const Grid2D& grid, std::shared_ptr<const NodeSet> support,
                                const IonPair& ions, const UnitSystem& units) {
  return HamiltonianOperator(grid, std::move(support), ions, units);
}

namespace {

void require_same_support(const HamiltonianOperator& H, const Wavefunction& psi) {
  if (psi.grid() != H.grid() ||
      (psi.support_ptr() != H.support_ptr() && !(psi.support() == H.support()))) {
    throw ShapeError("wavefunction support does not match the operator support");
  }
}

}  // namespace

Complex expectation_value_internal(const HamiltonianOperator& H, const Wavefunction& psi) {
  require_same_support(H, psi);
  return H.inner(psi.amplitudes(), psi.amplitudes());
}

double expectation_energy(const HamiltonianOperator& H, const Wavefunction& psi) {
  const Complex e = expectation_value_internal(H, psi);
  return from_internal(e.real(), QuantityKind::energy, H.units());
}

}  // namespace zeno
