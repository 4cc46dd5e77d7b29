#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "zeno/dynamics.hpp"
#include "zeno/geometry.hpp"
#include "zeno/operators.hpp"
#include "zeno/protocol.hpp"
#include "zeno/spectra.hpp"
#include "zeno/units.hpp"

namespace zeno {

enum class PostSuccessModel { ground_state, projected };

PostSuccessModel parse_post_success(std::string_view name);
std::string_view to_string(PostSuccessModel model);

/// Everything a run needs. Defaults describe a single step d_0 = 1 um to
/// d_1 = 0.992 um for two protons.
struct ProtocolConfig {
  // geometry
  double plate_separation = 1e-5;  // m
  int points_per_axis = 40959;
  double epsilon = 1e-15;     // m
  double length_scale = 0.0;  // m; 0 selects d_0

  // ions
  ChargeConfig charges = ChargeConfig::protons();
  double coulomb_k = PhysicalConstants::codata2018().coulomb_k;
  bool interacting = true;

  StepSchedule schedule{{1e-6, 9.92e-7}, {1e12}, {1e11}, 1e7};

  GroundStateOptions solver;
  LocalizationOptions localization;

  // free evolution between measurements
  int n_sub = 16;
  double cn_tolerance = 1e-12;
  int cn_max_iterations = 500;
  bool compute_leakage = true;

  PostSuccessModel post_success = PostSuccessModel::ground_state;
  std::int64_t monte_carlo_trials = 0;
  std::uint64_t seed = 0x5eedULL;
  int threads = 0;

  std::string report_json;
  std::string report_csv;
  std::string checkpoint;

  /// Checks every field; names the first offending one. Allocates nothing large.
  void validate() const;

  Grid2D grid() const { return Grid2D(plate_separation, points_per_axis); }
  IonPair ions() const { return IonPair{charges, coulomb_k, epsilon, interacting}; }
  UnitSystem units() const;
  EvolutionParams evolution(std::size_t step) const;
};

/// Parses the JSON config document. Missing keys keep their defaults, unknown
/// keys are rejected. Throws ValidationError naming the field, or
/// MalformedInputError for text that is not JSON.
ProtocolConfig parse_config(std::string_view text);
ProtocolConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys, round-trip exact numbers) of every field.
std::string config_to_json(const ProtocolConfig& config, int indent = 2);

}  // namespace zeno
