#include "zeno/wavefunction.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

double squared_norm(std::span<const Complex> v) noexcept {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return s;
}

Wavefunction::Wavefunction(Grid2D grid, std::shared_ptr<const NodeSet> support,
                           std::vector<Complex> amplitudes)
    : grid_(grid), support_(std::move(support)), amplitudes_(std::move(amplitudes)) {
  if (!support_) throw ShapeError("wavefunction needs a support");
  if (support_->points_per_axis() != grid_.points_per_axis()) {
    throw ShapeError("support lattice does not match the grid");
  }
  if (static_cast<std::int64_t>(amplitudes_.size()) != support_->size()) {
    throw ShapeError("amplitude count does not match the support size");
  }
  const double n = norm();
  if (std::abs(n - 1.0) > norm_tolerance) {
    std::ostringstream os;
    os << "wavefunction norm " << n << " differs from 1";
    throw ValidationError(os.str(), "amplitudes");
  }
}

Wavefunction Wavefunction::normalized(Grid2D grid, std::shared_ptr<const NodeSet> support,
                                      std::vector<Complex> amplitudes) {
  const double s = std::sqrt(squared_norm(amplitudes));
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw ZeroProbabilityError("cannot normalize a zero or non-finite state");
  }
  for (Complex& z : amplitudes) z /= s;
  return Wavefunction(grid, std::move(support), std::move(amplitudes));
}

double Wavefunction::norm() const noexcept { return std::sqrt(squared_norm(amplitudes_)); }

Complex Wavefunction::amplitude(int i, int j) const noexcept {
  const std::int64_t k = support_->index(i, j);
  return k < 0 ? Complex{} : amplitudes_[static_cast<std::size_t>(k)];
}

double Wavefunction::probability_in(const NodeSet& region) const {
  if (region.points_per_axis() != support_->points_per_axis()) {
    throw ShapeError("region lattice does not match the wavefunction grid");
  }
  const NodeSet overlap = support_->intersect(region);
  double p = 0.0;
  for (const Run& r : overlap.runs()) {
    std::int64_t k = support_->index(r.row, r.begin);
    for (int j = r.begin; j < r.end; ++j, ++k) p += std::norm(amplitudes_[static_cast<std::size_t>(k)]);
  }
  return p;
}

Wavefunction Wavefunction::embedded(std::shared_ptr<const NodeSet> superset) const {
  if (!superset || !support_->subset_of(*superset)) {
    throw ShapeError("target support does not contain the wavefunction support");
  }
  std::vector<Complex> out(static_cast<std::size_t>(superset->size()));
  for (const Run& r : support_->runs()) {
    const std::int64_t dst = superset->index(r.row, r.begin);
    for (int t = 0; t < r.length(); ++t) {
      out[static_cast<std::size_t>(dst + t)] = amplitudes_[static_cast<std::size_t>(r.offset + t)];
    }
  }
  Wavefunction w = *this;
  w.support_ = std::move(superset);
  w.amplitudes_ = std::move(out);
  return w;
}

}  // namespace zeno
