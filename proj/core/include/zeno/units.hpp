#pragma once

#include <string_view>

namespace zeno {

/// SI constants (CODATA 2018). `h` is exact by definition of the SI; `hbar`
/// is derived from it so that h = 2*pi*hbar holds to the last bit.
struct PhysicalConstants {
  double hbar;
  double h;
  double coulomb_k;
  double proton_mass;
  double elementary_charge;

  static constexpr double pi = 3.14159265358979323846;

  static constexpr PhysicalConstants codata2018() {
    constexpr double planck = 6.62607015e-34;
    return PhysicalConstants{planck / (2.0 * pi), planck, 8.9875517923e9, 1.67262192369e-27,
                             1.602176634e-19};
  }

  /// Throws ValidationError unless every constant is positive and h, hbar agree.
  void validate() const;
};

enum class QuantityKind { length, mass, energy, time, charge_coupling };

/// Accepts "length", "mass", "energy", "time", "charge-coupling".
QuantityKind parse_quantity_kind(std::string_view name);
std::string_view to_string(QuantityKind kind);

/// Internal unit system with hbar = 1: lengths in units of `length_scale`,
/// masses in units of `mass_scale`. Energy and time scales are derived on
/// every call rather than cached.
class UnitSystem {
 public:
  UnitSystem(double length_scale, double mass_scale,
             PhysicalConstants constants = PhysicalConstants::codata2018());

  double length_scale() const noexcept { return length_scale_; }
  double mass_scale() const noexcept { return mass_scale_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }

  /// hbar^2 / (mass_scale * length_scale^2)
  double energy_scale() const noexcept;
  /// hbar / energy_scale
  double time_scale() const noexcept;

  /// SI value of one internal unit of `kind`. For charge couplings (k*q1*q2,
  /// in J*m) the unit is energy_scale * length_scale.
  double scale(QuantityKind kind) const noexcept;

 private:
  double length_scale_;
  double mass_scale_;
  PhysicalConstants constants_;
};

double to_internal(double si_value, QuantityKind kind, const UnitSystem& units);
double from_internal(double internal_value, QuantityKind kind, const UnitSystem& units);

}  // namespace zeno
