#include "zeno/units.hpp"

#include <cmath>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

void PhysicalConstants::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("must be positive and finite", name);
  };
  require_positive(hbar, "hbar");
  require_positive(h, "h");
  require_positive(coulomb_k, "coulomb_k");
  require_positive(proton_mass, "proton_mass");
  require_positive(elementary_charge, "elementary_charge");
  if (std::abs(h - 2.0 * pi * hbar) > 1e-12 * h) {
    throw ValidationError("h and 2*pi*hbar disagree beyond 1e-12", "hbar");
  }
}

QuantityKind parse_quantity_kind(std::string_view name) {
  if (name == "length") return QuantityKind::length;
  if (name == "mass") return QuantityKind::mass;
  if (name == "energy") return QuantityKind::energy;
  if (name == "time") return QuantityKind::time;
  if (name == "charge-coupling" || name == "charge_coupling") return QuantityKind::charge_coupling;
  throw ValidationError("unknown quantity kind '" + std::string(name) + "'", "kind");
}

std::string_view to_string(QuantityKind kind) {
  switch (kind) {
    case QuantityKind::length: return "length";
    case QuantityKind::mass: return "mass";
    case QuantityKind::energy: return "energy";
    case QuantityKind::time: return "time";
    case QuantityKind::charge_coupling: return "charge-coupling";
  }
  return "unknown";
}

UnitSystem::UnitSystem(double length_scale, double mass_scale, PhysicalConstants constants)
    : length_scale_(length_scale), mass_scale_(mass_scale), constants_(constants) {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw ValidationError("must be positive and finite", "length_scale");
  }
  if (!(mass_scale > 0.0) || !std::isfinite(mass_scale)) {
    throw ValidationError("must be positive and finite", "mass_scale");
  }
  constants_.validate();
}

double UnitSystem::energy_scale() const noexcept {
  const double hbar = constants_.hbar;
  return (hbar / (mass_scale_ * length_scale_)) * (hbar / length_scale_);
}

double UnitSystem::time_scale() const noexcept { return constants_.hbar / energy_scale(); }

double UnitSystem::scale(QuantityKind kind) const noexcept {
  switch (kind) {
    case QuantityKind::length: return length_scale_;
    case QuantityKind::mass: return mass_scale_;
    case QuantityKind::energy: return energy_scale();
    case QuantityKind::time: return time_scale();
    case QuantityKind::charge_coupling: return energy_scale() * length_scale_;
  }
  return 1.0;
}

double to_internal(double si_value, QuantityKind kind, const UnitSystem& units) {
  return si_value / units.scale(kind);
}

double from_internal(double internal_value, QuantityKind kind, const UnitSystem& units) {
  return internal_value * units.scale(kind);
}

}  // namespace zeno
