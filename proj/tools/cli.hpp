#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zeno/config.hpp"
#include "zeno/errors.hpp"

namespace zeno::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, numerical = 3, io = 4 };

int exit_code(ErrorCategory category) noexcept;

/// One row of a resolution sweep.
struct ConvergenceRow {
  int points_per_axis;
  double spacing;           // m
  double e0;                // J, ground state at d_0 (full square when non-interacting)
  std::optional<double> e1;  // J, ground state at d_1
  std::optional<double> probability;
  std::optional<double> error;  // E0 - analytic box energy, non-interacting only
  std::optional<double> ratio;  // error ratio or relative change against the previous row
};

/// Continuum ground-state energy of two free particles in a box of side L.
double box_energy(double plate_separation, const ChargeConfig& charges,
                  const PhysicalConstants& c = PhysicalConstants::codata2018());

/// Ground-state sweep over strictly increasing resolutions.
std::vector<ConvergenceRow> convergence_sweep(const ProtocolConfig& config,
                                              const std::vector<int>& resolutions);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Text bitmap of one mask (P1) or of several nested masks (P2, value = number
/// of masks containing the node).
std::string mask_dump(const ProtocolConfig& config, const std::vector<double>& lengths);

/// Parses argv and runs one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zeno::cli
